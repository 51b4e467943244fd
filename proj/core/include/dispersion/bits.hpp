#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dispersion {

/// Smallest w with 2^w >= x; 0 for x <= 1.
constexpr unsigned ceil_log2(std::uint64_t x) noexcept {
  unsigned w = 0;
  while (w < 64 && (std::uint64_t{1} << w) < x) ++w;
  return w;
}

/// Field widths of the canonical payload encoding for one graph. Robots
/// never see these; the auditor does.
struct EncodingWidths {
  unsigned port = 0;      // ceil(log2 Delta)
  unsigned distance = 0;  // ceil(log2 n)
  unsigned mask = 0;      // Delta
  unsigned counter = 0;   // ceil(log2 cap)
};

inline EncodingWidths encoding_widths(std::size_t max_degree, std::size_t n,
                                      std::size_t counter_cap = 1) {
  return EncodingWidths{ceil_log2(max_degree), ceil_log2(n),
                        static_cast<unsigned>(max_degree), ceil_log2(counter_cap)};
}

struct FieldBits {
  std::string name;
  unsigned width = 0;
};

class EncodingError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Packs payload fields at fixed widths. Counting is always on; the field
/// breakdown and the bit string itself are kept only when `record` is set.
class BitEncoder {
 public:
  explicit BitEncoder(bool record = false) : record_(record) {}

  void field(std::string_view name, unsigned width, std::uint64_t value) {
    if (width < 64 && (value >> width) != 0) {
      throw EncodingError("field '" + std::string(name) + "' value " + std::to_string(value) +
                          " does not fit in " + std::to_string(width) + " bits");
    }
    size_ += width;
    if (!record_) return;
    fields_.push_back({std::string(name), width});
    for (unsigned i = width; i-- > 0;) bits_.push_back(((value >> i) & 1U) != 0 ? '1' : '0');
  }

  void flag(std::string_view name, bool value) { field(name, 1, value ? 1 : 0); }

  /// A bit vector padded with zeros to `width`.
  void mask(std::string_view name, const std::vector<bool>& value, unsigned width) {
    if (value.size() > width) {
      throw EncodingError("mask '" + std::string(name) + "' has " +
                          std::to_string(value.size()) + " bits, width is " +
                          std::to_string(width));
    }
    size_ += width;
    if (!record_) return;
    fields_.push_back({std::string(name), width});
    for (unsigned i = 0; i < width; ++i) bits_.push_back(i < value.size() && value[i] ? '1' : '0');
  }

  std::size_t size() const noexcept { return size_; }
  const std::vector<FieldBits>& fields() const noexcept { return fields_; }
  const std::string& bits() const noexcept { return bits_; }

 private:
  bool record_;
  std::size_t size_ = 0;
  std::vector<FieldBits> fields_;
  std::string bits_;
};

}  // namespace dispersion
