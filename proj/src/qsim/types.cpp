#include "qcaas/qsim/types.hpp"

#include "qcaas/common/error.hpp"

namespace qcaas::qsim {

std::string to_bitstring(std::uint64_t value, std::uint32_t width) {
  if (width == 0 || width > 64) {
    throw Error(ErrorCode::InvalidArgument, "bitstring width must be in [1, 64]");
  }
  std::string bits(width, '0');
  for (std::uint32_t k = 0; k < width; ++k) {
    if ((value >> k) & 1ull) {
      bits[width - 1 - k] = '1';
    }
  }
  return bits;
}

std::uint64_t from_bitstring(const std::string& bits) {
  if (bits.empty() || bits.size() > 64) {
    throw Error(ErrorCode::InvalidArgument, "bitstring length must be in [1, 64]");
  }
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    const char c = bits[i];
    if (c != '0' && c != '1') {
      throw Error(ErrorCode::InvalidArgument, "bitstring may contain only '0' and '1'");
    }
    if (c == '1') {
      value |= std::uint64_t{1} << (bits.size() - 1 - i);
    }
  }
  return value;
}

}  // namespace qcaas::qsim
