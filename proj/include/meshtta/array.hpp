#pragma once

// Lockstep 2-D mesh of PEs. Every cycle runs in two phases: all shared
// registers are snapshotted, every non-halted PE executes its group's current
// instruction against the snapshot, then pending shared writes are committed.
// The result is independent of the order PEs are visited in.
//
// Loader contract: both loaders deposit each PE's own pixel in the shared
// register and in RF.0, mirroring a readout path that writes into the PE
// (the NFU only reads neighbors, so a PE cannot fetch its own shared value).

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "meshtta/pe_core.hpp"

namespace meshtta {

// Static PE-group assignment. Every PE must match exactly one group.
struct GroupRule {
  enum class Kind { All, Rect, IndexMod };
  Kind kind = Kind::All;
  // Rect: [x0, x0+w) x [y0, y0+h)
  int x0 = 0, y0 = 0, w = 0, h = 0;
  // IndexMod: (x % mod_x == rem_x) && (y % mod_y == rem_y)
  int mod_x = 1, rem_x = 0, mod_y = 1, rem_y = 0;

  static GroupRule all() { return {}; }
  static GroupRule rect(int x0, int y0, int w, int h);
  static GroupRule index_mod(int mod_x, int rem_x, int mod_y, int rem_y);
  bool matches(int x, int y) const;
};

struct Group {
  GroupRule rule;
  Program program;
};

struct ArrayConfig {
  int rows = 0;
  int cols = 0;
  BoundaryPolicy boundary = BoundaryPolicy::Zero;
  std::vector<Group> groups;
  bool trace_enabled = false;
};

struct TraceEvent {
  std::uint64_t cycle = 0;
  int group = 0;
  std::uint16_t x = 0, y = 0;
  bool executed = false;
  Move move;
  word_t bus_value = 0;
};

// "<cycle> g<group> (<x>,<y>) <E|S> bus=<value> <move>"
std::string format_trace_event(const TraceEvent& ev);

struct RunStats {
  std::uint64_t cycles = 0;
  std::uint64_t load_cycles = 0;
  std::uint64_t executed_moves = 0;
  std::uint64_t squashed_moves = 0;
  int halted_pe_count = 0;
  bool cutoff = false;
};

struct PlaneSource {
  bool is_shared = true;
  int gpr_index = 0;
  static PlaneSource shared() { return {}; }
  static PlaneSource gpr(int k);
};

struct ArrayState {
  ArrayConfig config;
  std::vector<PEState> grid;   // row major, index = y * cols + x
  std::vector<int> group_of;   // per-PE group index
  std::uint64_t cycle = 0;

  PEState& pe(int x, int y) { return grid[static_cast<std::size_t>(y) * config.cols + x]; }
  const PEState& pe(int x, int y) const {
    return grid[static_cast<std::size_t>(y) * config.cols + x];
  }
  bool all_halted() const;

  bool operator==(const ArrayState& o) const { return grid == o.grid && cycle == o.cycle; }
};

// Validates that the group rules cover every PE exactly once.
ArrayState init_array(ArrayConfig config);

// Eight shared_current values around (x, y), off-grid per boundary policy.
NeighborView neighbor_view(const ArrayState& state, int x, int y);

// One global cycle. With no live PE this is a no-op (the cycle counter does
// not advance). A PE halts implicitly once it runs past its program's end.
void step(ArrayState& state, RunStats* stats = nullptr, std::vector<TraceEvent>* trace = nullptr);

// Same cycle, visiting PEs in the given order (a permutation of all PE
// indices). The snapshot/commit discipline makes the result order-invariant.
void step_with_order(ArrayState& state, std::span<const int> order, RunStats* stats = nullptr,
                     std::vector<TraceEvent>* trace = nullptr);

// Steps until every PE halts or max_cycles is hit (then stats.cutoff is set).
RunStats run(ArrayState& state, std::uint64_t max_cycles,
             std::vector<TraceEvent>* trace = nullptr);

// Direct deposit, zero simulated cycles. Image dims must equal the grid dims.
void load_image_flat(ArrayState& state, const ImagePlane& img);

// Column-serial injection with east propagation; costs exactly `cols` cycles
// (returned) and leaves the same state as load_image_flat.
std::uint64_t load_image_wave(ArrayState& state, const ImagePlane& img);

ImagePlane read_plane(const ArrayState& state, PlaneSource source);

// Number of window positions per axis for a fovea sweep.
int fovea_window_count(int image_extent, int grid_extent, int halo);

struct FoveaResult {
  ImagePlane plane;
  RunStats stats;
  int windows_x = 0;
  int windows_y = 0;
};

// Sweeps the grid-sized window over a larger image with step grid-2*halo per
// axis, wave-loads each window (padded per boundary policy), runs the
// program, and stitches the non-halo window outputs into a full-size plane.
FoveaResult run_fovea(const ImagePlane& img, const ArrayConfig& config, int halo,
                      std::uint64_t max_cycles, PlaneSource source = PlaneSource::gpr(3));

} // namespace meshtta
