#include "fkclock/clock.hpp"

#include <stdexcept>

namespace fkclock {

std::string to_string(Encoding e) { return e == Encoding::Gray ? "gray" : "binary"; }

Encoding encoding_from_string(std::string_view s) {
  if (s == "gray") return Encoding::Gray;
  if (s == "binary") return Encoding::Binary;
  throw std::invalid_argument("unknown clock encoding '" + std::string(s) + "'");
}

void ClockSpec::validate() const {
  if (n_aux < 1 || n_aux > 30) throw std::invalid_argument("n_aux must be in [1, 30]");
}

std::uint64_t encode(std::size_t level, const ClockSpec& spec) {
  spec.validate();
  if (level >= spec.levels()) {
    throw std::out_of_range("clock level " + std::to_string(level) + " outside [0, " +
                            std::to_string(spec.levels()) + ")");
  }
  const auto i = static_cast<std::uint64_t>(level);
  return spec.encoding == Encoding::Gray ? (i ^ (i >> 1)) : i;
}

std::string encode_bits(std::size_t level, const ClockSpec& spec) {
  const std::uint64_t code = encode(level, spec);
  std::string s(spec.n_aux, '0');
  for (std::size_t k = 0; k < spec.n_aux; ++k) {
    if (code & (std::uint64_t{1} << (spec.n_aux - 1 - k))) s[k] = '1';
  }
  return s;
}

std::size_t decode(std::uint64_t code, const ClockSpec& spec) {
  spec.validate();
  if (code >= spec.levels()) throw std::out_of_range("clock code outside register");
  if (spec.encoding == Encoding::Binary) return static_cast<std::size_t>(code);
  std::uint64_t level = code;
  for (std::uint64_t shift = code >> 1; shift != 0; shift >>= 1) level ^= shift;
  return static_cast<std::size_t>(level);
}

PauliSum basis_transition(std::uint64_t to, std::uint64_t from, std::size_t width) {
  // Per qubit: |x⟩⟨x| = ½(I + (−1)^x Z); |1⟩⟨0| = ½(X − iY); |0⟩⟨1| = ½(X + iY).
  PauliSum out = PauliSum::identity(0);
  const cplx i{0.0, 1.0};
  for (std::size_t q = 0; q < width; ++q) {
    const std::uint64_t b = std::uint64_t{1} << (width - 1 - q);
    const bool x_from = (from & b) != 0, x_to = (to & b) != 0;
    PauliSum factor(1);
    if (x_from == x_to) {
      factor.add_term("I", 0.5);
      factor.add_term("Z", x_from ? -0.5 : 0.5);
    } else {
      factor.add_term("X", 0.5);
      factor.add_term("Y", x_from ? 0.5 * i : -0.5 * i);
    }
    out = tensor(out, factor);
  }
  return out;
}

PauliSum basis_projector(std::uint64_t bits, std::size_t width) {
  return basis_transition(bits, bits, width);
}

PauliSum projector(std::size_t level, const ClockSpec& spec) {
  return basis_projector(encode(level, spec), spec.n_aux);
}

PauliSum hop(std::size_t level, const ClockSpec& spec) {
  if (level + 1 >= spec.levels()) {
    throw std::out_of_range("clock level " + std::to_string(level) + " has no successor");
  }
  return basis_transition(encode(level + 1, spec), encode(level, spec), spec.n_aux);
}

}  // namespace fkclock
