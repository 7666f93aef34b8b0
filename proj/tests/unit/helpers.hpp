#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <random>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

#include "fkclock/pauli.hpp"
#include "fkclock/sim.hpp"

namespace fkclock::test {

// Hand-written Pauli matrices, kept independent of the library's renderer.
inline Eigen::Matrix2cd dense_pauli(char p) {
  Eigen::Matrix2cd m;
  const cplx i{0.0, 1.0};
  switch (p) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m.setIdentity();
  }
  return m;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

/// Operator `m` on qubit q of a width-w register, qubit 0 leftmost.
inline Eigen::MatrixXcd embed(const Eigen::MatrixXcd& m, std::size_t q, std::size_t w) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t k = 0; k < w; ++k) out = kron(out, k == q ? m : Eigen::MatrixXcd(Eigen::Matrix2cd::Identity()));
  return out;
}

inline PauliString random_string(std::size_t w, std::mt19937_64& rng) {
  std::string s;
  for (std::size_t k = 0; k < w; ++k) s += "IXYZ"[rng() % 4];
  return PauliString(s);
}

inline PauliSum random_sum(std::size_t w, std::size_t terms, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  PauliSum s(w);
  for (std::size_t k = 0; k < terms; ++k) s.add_term(random_string(w, rng), {g(rng), g(rng)});
  return s;
}

inline PauliSum random_hermitian(std::size_t w, std::size_t terms, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  PauliSum s(w);
  for (std::size_t k = 0; k < terms; ++k) s.add_term(random_string(w, rng), g(rng));
  return s;
}

inline StateVector random_state(std::size_t w, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(Eigen::Index{1} << w);
  for (auto& a : v) a = {g(rng), g(rng)};
  v.normalize();
  return StateVector(w, v);
}

inline std::vector<double> random_angles(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.14159, 3.14159);
  std::vector<double> t(n);
  for (auto& x : t) x = u(rng);
  return t;
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("fkclock_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fkclock::test
