#include "potts/bonds.hpp"

#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace potts {

namespace {
int edge_count(int n) { return 2 * (2 * n) * (2 * n + 1); }

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
void get(std::istream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof v);
}
}  // namespace

BondConfig BondConfig::all(int n, LatticeTag tag, WiringTag w, bool value) {
  BondConfig bc;
  bc.n = n;
  bc.lattice = tag;
  bc.wiring = w;
  bc.open.assign(edge_count(n), value ? 1 : 0);
  return bc;
}

BondConfig dual_config(const BondConfig& bc) {
  BondConfig out;
  out.n = bc.n;
  out.lattice = bc.lattice == LatticeTag::primal ? LatticeTag::dual : LatticeTag::primal;
  out.wiring = bc.wiring == WiringTag::free_bc ? WiringTag::wired_bc : WiringTag::free_bc;
  out.open.resize(bc.open.size());
  for (std::size_t e = 0; e < bc.open.size(); ++e) out.open[e] = bc.open[e] ? 0 : 1;
  return out;
}

static const char kMagic[4] = {'F', 'K', 'S', '1'};

void write_sample(std::ostream& os, const SampleHeader& h, const BondConfig& bc) {
  os.write(kMagic, 4);
  put(os, h.n);
  put(os, h.q);
  put(os, h.beta);
  put(os, static_cast<std::uint8_t>(bc.lattice));
  put(os, static_cast<std::uint8_t>(bc.wiring));
  put(os, static_cast<std::uint32_t>(h.bc_descriptor.size()));
  os.write(h.bc_descriptor.data(), static_cast<std::streamsize>(h.bc_descriptor.size()));
  put(os, h.seed);
  put(os, h.sample_index);
  put(os, static_cast<std::uint32_t>(bc.open.size()));
  std::vector<std::uint8_t> packed((bc.open.size() + 7) / 8, 0);
  for (std::size_t e = 0; e < bc.open.size(); ++e)
    if (bc.open[e]) packed[e / 8] |= static_cast<std::uint8_t>(1u << (e % 8));
  os.write(reinterpret_cast<const char*>(packed.data()),
           static_cast<std::streamsize>(packed.size()));
}

BondConfig read_sample(std::istream& is, SampleHeader& h) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("read_sample: bad magic");
  get(is, h.n);
  get(is, h.q);
  get(is, h.beta);
  std::uint8_t lat, wir;
  get(is, lat);
  get(is, wir);
  std::uint32_t bclen;
  get(is, bclen);
  h.bc_descriptor.resize(bclen);
  is.read(h.bc_descriptor.data(), bclen);
  get(is, h.seed);
  get(is, h.sample_index);
  std::uint32_t ne;
  get(is, ne);
  if (ne != static_cast<std::uint32_t>(edge_count(static_cast<int>(h.n))))
    throw std::runtime_error("read_sample: edge count does not match n");
  BondConfig bc;
  bc.n = static_cast<int>(h.n);
  bc.lattice = static_cast<LatticeTag>(lat);
  bc.wiring = static_cast<WiringTag>(wir);
  bc.open.assign(ne, 0);
  std::vector<std::uint8_t> packed((ne + 7) / 8);
  is.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(packed.size()));
  if (!is) throw std::runtime_error("read_sample: truncated payload");
  for (std::uint32_t e = 0; e < ne; ++e)
    bc.open[e] = (packed[e / 8] >> (e % 8)) & 1u;
  return bc;
}

}  // namespace potts
