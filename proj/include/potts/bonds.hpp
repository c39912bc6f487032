#ifndef POTTS_BONDS_HPP
#define POTTS_BONDS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace potts {

enum class LatticeTag : std::uint8_t { primal = 0, dual = 1 };
enum class WiringTag : std::uint8_t { free_bc = 0, wired_bc = 1 };

// Open/closed marks on E_n (primal) or E_n^* (dual); the two edge sets share
// indices, so complementation is index-preserving.
struct BondConfig {
  int n = 0;
  LatticeTag lattice = LatticeTag::primal;
  WiringTag wiring = WiringTag::free_bc;
  std::vector<std::uint8_t> open;

  bool is_open(int e) const { return open[e] != 0; }
  void set(int e, bool v) { open[e] = v ? 1 : 0; }
  int open_count() const {
    int c = 0;
    for (auto b : open) c += b;
    return c;
  }
  static BondConfig all(int n, LatticeTag tag, WiringTag w, bool value);
};

// omega(e) = 1 - omega(e*): complemented marks on the paired lattice, with
// the free/wired tags swapped. An involution.
BondConfig dual_config(const BondConfig& bc);

// Binary sample dump (see docs/formats.md). Header records the provenance
// needed for bit-exact replay; edge states are packed LSB-first.
struct SampleHeader {
  std::uint32_t n = 0;
  std::uint32_t q = 0;
  double beta = 0.0;
  LatticeTag lattice = LatticeTag::primal;
  std::string bc_descriptor;
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;
};

void write_sample(std::ostream& os, const SampleHeader& h, const BondConfig& bc);
BondConfig read_sample(std::istream& is, SampleHeader& h);

}  // namespace potts

#endif
