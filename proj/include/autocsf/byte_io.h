#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include <autocsf/bit_array.h>
#include <autocsf/errors.h>

namespace autocsf {

// Append-only little-endian byte sink used by all serializers.
class ByteWriter {
 public:
  void writeU8(uint8_t v) { bytes_.push_back(v); }

  void writeU16(uint16_t v) { writeLittle(v, 2); }
  void writeU32(uint32_t v) { writeLittle(v, 4); }
  void writeU64(uint64_t v) { writeLittle(v, 8); }

  void writeBytes(const void* data, size_t length) {
    const uint8_t* p = static_cast<const uint8_t*>(data);
    bytes_.insert(bytes_.end(), p, p + length);
  }

  size_t size() const { return bytes_.size(); }
  const std::vector<uint8_t>& bytes() const { return bytes_; }
  std::vector<uint8_t> takeBytes() { return std::move(bytes_); }

 private:
  void writeLittle(uint64_t v, int num_bytes) {
    for (int i = 0; i < num_bytes; i++) {
      bytes_.push_back(static_cast<uint8_t>(v >> (8 * i)));
    }
  }

  std::vector<uint8_t> bytes_;
};

// Bounds-checked little-endian byte source. Throws CorruptPayloadError on
// truncated input instead of reading past the end.
class ByteReader {
 public:
  ByteReader(const uint8_t* data, size_t length)
      : data_(data), length_(length) {}
  explicit ByteReader(const std::vector<uint8_t>& bytes)
      : ByteReader(bytes.data(), bytes.size()) {}

  uint8_t readU8() { return static_cast<uint8_t>(readLittle(1)); }
  uint16_t readU16() { return static_cast<uint16_t>(readLittle(2)); }
  uint32_t readU32() { return static_cast<uint32_t>(readLittle(4)); }
  uint64_t readU64() { return readLittle(8); }

  void readBytes(void* out, size_t length) {
    require(length);
    std::memcpy(out, data_ + position_, length);
    position_ += length;
  }

  size_t position() const { return position_; }
  size_t remaining() const { return length_ - position_; }
  bool atEnd() const { return position_ == length_; }

 private:
  void require(size_t length) const {
    if (length > length_ - position_) {
      throw CorruptPayloadError("serialized payload is truncated");
    }
  }

  uint64_t readLittle(int num_bytes) {
    require(static_cast<size_t>(num_bytes));
    uint64_t v = 0;
    for (int i = 0; i < num_bytes; i++) {
      v |= static_cast<uint64_t>(data_[position_ + i]) << (8 * i);
    }
    position_ += static_cast<size_t>(num_bytes);
    return v;
  }

  const uint8_t* data_;
  size_t length_;
  size_t position_ = 0;
};

// LSB-first bit sink layered on top of a growing byte buffer. Bit k of the
// stream is bit k%8 of byte k/8, which matches the in-memory layout of
// BitArray words on a little-endian host.
class BitWriter {
 public:
  void writeBit(bool bit) {
    if (bit_offset_ == 0) {
      bytes_.push_back(0);
    }
    if (bit) {
      bytes_.back() |= static_cast<uint8_t>(1u << bit_offset_);
    }
    bit_offset_ = (bit_offset_ + 1) & 7;
  }

  // Writes `count` (<= 64) bits of `value`, LSB first.
  void writeBits(uint64_t value, int count) {
    for (int i = 0; i < count; i++) {
      writeBit((value >> i) & 1ULL);
    }
  }

  void writeUnary(uint64_t count) {
    for (uint64_t i = 0; i < count; i++) {
      writeBit(true);
    }
    writeBit(false);
  }

  // Rice/Golomb code with power-of-two parameter 2^k.
  void writeRice(uint64_t value, int k) {
    writeUnary(value >> k);
    writeBits(value & ((k < 64) ? ((1ULL << k) - 1) : ~0ULL), k);
  }

  void appendBitArray(const BitArray& bits) {
    for (uint64_t i = 0; i < bits.numBits(); i++) {
      writeBit(bits.get(i));
    }
  }

  uint64_t numBits() const {
    return bytes_.size() * 8 - ((8 - bit_offset_) & 7);
  }

  // Flushes into `out`, zero-padding the final partial byte.
  void flushTo(ByteWriter& out) {
    out.writeBytes(bytes_.data(), bytes_.size());
    bytes_.clear();
    bit_offset_ = 0;
  }

 private:
  std::vector<uint8_t> bytes_;
  int bit_offset_ = 0;
};

// LSB-first bit source over a byte span.
class BitReader {
 public:
  BitReader(const uint8_t* data, size_t num_bytes)
      : data_(data), num_bits_(num_bytes * 8) {}

  bool readBit() {
    if (position_ >= num_bits_) {
      throw CorruptPayloadError("bit stream is truncated");
    }
    bool bit = (data_[position_ >> 3] >> (position_ & 7)) & 1u;
    position_++;
    return bit;
  }

  uint64_t readBits(int count) {
    uint64_t value = 0;
    for (int i = 0; i < count; i++) {
      value |= static_cast<uint64_t>(readBit()) << i;
    }
    return value;
  }

  uint64_t readUnary() {
    uint64_t count = 0;
    while (readBit()) {
      count++;
    }
    return count;
  }

  uint64_t readRice(int k) {
    uint64_t q = readUnary();
    return (q << k) | readBits(k);
  }

  uint64_t position() const { return position_; }

 private:
  const uint8_t* data_;
  uint64_t num_bits_;
  uint64_t position_ = 0;
};

// Zigzag mapping for signed deltas stored with Rice codes.
inline uint64_t zigzagEncode(int64_t v) {
  return (static_cast<uint64_t>(v) << 1) ^ static_cast<uint64_t>(v >> 63);
}

inline int64_t zigzagDecode(uint64_t v) {
  return static_cast<int64_t>(v >> 1) ^ -static_cast<int64_t>(v & 1);
}

// Number of bytes needed to store `value` (at least one).
inline int bytesForValue(uint64_t value) {
  int bytes = 1;
  while (value >> (8 * bytes) != 0 && bytes < 8) {
    bytes++;
  }
  return bytes;
}

// Number of bits needed to store values in [0, count); zero for count <= 1.
inline int bitsForCount(uint64_t count) {
  int bits = 0;
  while ((1ULL << bits) < count) {
    bits++;
  }
  return bits;
}

}  // namespace autocsf
