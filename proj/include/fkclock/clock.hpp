#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "fkclock/pauli.hpp"

namespace fkclock {

enum class Encoding { Binary, Gray };

std::string to_string(Encoding e);
Encoding encoding_from_string(std::string_view s);

/// Clock register of n_aux qubits holding 2^n_aux time levels (2^n_aux − 1 hops).
struct ClockSpec {
  std::size_t n_aux = 1;
  Encoding encoding = Encoding::Gray;

  std::size_t levels() const { return std::size_t{1} << n_aux; }
  std::size_t hops() const { return levels() - 1; }
  void validate() const;
};

/// Integer code of a level; its n_aux-bit big-endian rendering is the clock bit-string.
std::uint64_t encode(std::size_t level, const ClockSpec& spec);
std::string encode_bits(std::size_t level, const ClockSpec& spec);
std::size_t decode(std::uint64_t code, const ClockSpec& spec);

/// |b⟩⟨b| for a computational-basis string `bits` over `width` qubits, as 2^width I/Z terms.
PauliSum basis_projector(std::uint64_t bits, std::size_t width);
/// |to⟩⟨from| over `width` qubits.
PauliSum basis_transition(std::uint64_t to, std::uint64_t from, std::size_t width);

/// |b(i)⟩⟨b(i)| on the clock register.
PauliSum projector(std::size_t level, const ClockSpec& spec);
/// |b(i+1)⟩⟨b(i)| on the clock register.
PauliSum hop(std::size_t level, const ClockSpec& spec);

}  // namespace fkclock
