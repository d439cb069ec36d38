#include "dwym/snapshot.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

namespace dwym {

namespace {

constexpr char kMagic[4] = {'D', 'W', 'Y', 'M'};

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  void f64(double d) {
    const auto v = std::bit_cast<std::uint64_t>(d);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
  }
  std::vector<unsigned char> buf;
};

class Reader {
 public:
  Reader(const unsigned char* p, std::size_t n) : p_(p), n_(n) {}
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }
  std::size_t pos() const { return pos_; }
  void need(std::size_t k) const {
    if (pos_ + k > n_) throw SnapshotError("snapshot: truncated file");
  }

 private:
  const unsigned char* p_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

const ComplexField* fields_of(const GaugeFieldState& s, int k) {
  switch (k) {
    case 0: return &s.phi_field();
    case 1: return &s.pi_field();
    case 2: return &s.a_field();
    default: return &s.p_field();
  }
}

ComplexField* fields_of(GaugeFieldState& s, int k) {
  return const_cast<ComplexField*>(fields_of(static_cast<const GaugeFieldState&>(s), k));
}

}  // namespace

void snapshot_write(const GaugeFieldState& state, const std::filesystem::path& path) {
  Writer w;
  w.buf.insert(w.buf.end(), kMagic, kMagic + 4);
  w.u32(kSnapshotVersion);
  const LatticeSpec& spec = state.spec();
  w.u32(static_cast<std::uint32_t>(spec.dim));
  w.u32(static_cast<std::uint32_t>(state.n()));
  for (int mu = 0; mu < spec.dim; ++mu) w.u32(static_cast<std::uint32_t>(spec.extent[mu]));
  for (int mu = 0; mu < spec.dim; ++mu) w.f64(spec.spacing[mu]);
  w.f64(state.params().q);
  w.f64(state.params().m);
  const std::size_t payload_start = w.buf.size();
  for (int k = 0; k < 4; ++k)
    for (const cplx& z : fields_of(state, k)->values()) {
      w.f64(z.real());
      w.f64(z.imag());
    }
  const uLong crc = crc32(0L, w.buf.data() + payload_start,
                          static_cast<uInt>(w.buf.size() - payload_start));
  w.u32(static_cast<std::uint32_t>(crc));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("snapshot: cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(w.buf.data()), static_cast<std::streamsize>(w.buf.size()));
  if (!out) throw SnapshotError("snapshot: write to " + path.string() + " failed");
}

GaugeFieldState snapshot_read(const std::filesystem::path& path, std::optional<int> expected_n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SnapshotError("snapshot: cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  if (bytes.size() < 4) throw SnapshotError("snapshot: truncated file");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw SnapshotError("snapshot: bad magic");
  Reader r(bytes.data() + 4, bytes.size() - 4);
  const std::uint32_t version = r.u32();
  if (version != kSnapshotVersion)
    throw SnapshotError("snapshot: version mismatch (file " + std::to_string(version) +
                        ", reader " + std::to_string(kSnapshotVersion) + ")");
  const std::uint32_t dim = r.u32();
  const std::uint32_t n = r.u32();
  if (dim < 2 || dim > kMaxDim || n < 1 || n > kMaxOrder)
    throw SnapshotError("snapshot: corrupt header");
  if (expected_n && static_cast<int>(n) != *expected_n)
    throw SnapshotError("snapshot: param mismatch (file N=" + std::to_string(n) +
                        ", expected N=" + std::to_string(*expected_n) + ")");
  std::array<int, kMaxDim> ext{};
  std::array<double, kMaxDim> sp{};
  for (std::uint32_t mu = 0; mu < dim; ++mu) ext[mu] = static_cast<int>(r.u32());
  for (std::uint32_t mu = 0; mu < dim; ++mu) sp[mu] = r.f64();
  ModelParams params;
  params.n = static_cast<int>(n);
  params.q = r.f64();
  params.m = r.f64();

  GaugeFieldState state;
  try {
    state = new_state(LatticeSpec::make(std::span(ext.data(), dim), std::span(sp.data(), dim)),
                      params);
  } catch (const std::invalid_argument& e) {
    throw SnapshotError(std::string("snapshot: corrupt header: ") + e.what());
  }
  std::size_t count = 0;
  for (int k = 0; k < 4; ++k) count += fields_of(state, k)->values().size();
  const std::size_t payload_start = 4 + r.pos();
  r.need(count * 16 + 4);
  for (int k = 0; k < 4; ++k)
    for (cplx& z : fields_of(state, k)->values()) {
      const double re = r.f64();
      const double im = r.f64();
      z = cplx(re, im);
    }
  const uLong crc =
      crc32(0L, bytes.data() + payload_start, static_cast<uInt>(count * 16));
  if (r.u32() != static_cast<std::uint32_t>(crc)) throw SnapshotError("snapshot: checksum failure");
  return state;
}

}  // namespace dwym
