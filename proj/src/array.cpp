#include "meshtta/array.hpp"

#include <algorithm>
#include <numeric>

namespace meshtta {

GroupRule GroupRule::rect(int x0, int y0, int w, int h) {
  GroupRule r;
  r.kind = Kind::Rect;
  r.x0 = x0;
  r.y0 = y0;
  r.w = w;
  r.h = h;
  return r;
}

GroupRule GroupRule::index_mod(int mod_x, int rem_x, int mod_y, int rem_y) {
  if (mod_x <= 0 || mod_y <= 0) throw std::invalid_argument("group modulus must be positive");
  GroupRule r;
  r.kind = Kind::IndexMod;
  r.mod_x = mod_x;
  r.rem_x = rem_x;
  r.mod_y = mod_y;
  r.rem_y = rem_y;
  return r;
}

bool GroupRule::matches(int x, int y) const {
  switch (kind) {
    case Kind::All: return true;
    case Kind::Rect: return x >= x0 && x < x0 + w && y >= y0 && y < y0 + h;
    case Kind::IndexMod: return x % mod_x == rem_x && y % mod_y == rem_y;
  }
  return false;
}

PlaneSource PlaneSource::gpr(int k) {
  if (k < 0 || k >= 8) throw std::invalid_argument("GPR index out of range");
  PlaneSource s;
  s.is_shared = false;
  s.gpr_index = k;
  return s;
}

bool ArrayState::all_halted() const {
  return std::all_of(grid.begin(), grid.end(), [](const PEState& pe) { return pe.halted; });
}

ArrayState init_array(ArrayConfig config) {
  if (config.rows < 1 || config.cols < 1)
    throw std::invalid_argument("array must have at least one PE");
  if (config.groups.empty()) throw std::invalid_argument("array needs at least one group");

  ArrayState state;
  state.grid.resize(static_cast<std::size_t>(config.rows) * config.cols);
  state.group_of.resize(state.grid.size());
  for (int y = 0; y < config.rows; ++y) {
    for (int x = 0; x < config.cols; ++x) {
      int matched = -1;
      for (std::size_t g = 0; g < config.groups.size(); ++g) {
        if (!config.groups[g].rule.matches(x, y)) continue;
        if (matched >= 0)
          throw std::invalid_argument("PE (" + std::to_string(x) + "," + std::to_string(y) +
                                      ") matched by more than one group");
        matched = static_cast<int>(g);
      }
      if (matched < 0)
        throw std::invalid_argument("PE (" + std::to_string(x) + "," + std::to_string(y) +
                                    ") matched by no group");
      std::size_t i = static_cast<std::size_t>(y) * config.cols + x;
      state.group_of[i] = matched;
      PEState& pe = state.grid[i];
      pe.x = static_cast<std::uint16_t>(x);
      pe.y = static_cast<std::uint16_t>(y);
      // an empty program means there is nothing to run
      pe.halted = config.groups[matched].program.moves.empty();
    }
  }
  state.config = std::move(config);
  return state;
}

namespace {

word_t sample_shared(const std::vector<word_t>& shared, int cols, int rows, int x, int y,
                     BoundaryPolicy policy) {
  if (x >= 0 && x < cols && y >= 0 && y < rows)
    return shared[static_cast<std::size_t>(y) * cols + x];
  switch (policy) {
    case BoundaryPolicy::Zero:
      return 0;
    case BoundaryPolicy::Clamp:
      x = std::clamp(x, 0, cols - 1);
      y = std::clamp(y, 0, rows - 1);
      return shared[static_cast<std::size_t>(y) * cols + x];
    case BoundaryPolicy::Wrap: {
      x %= cols;
      if (x < 0) x += cols;
      y %= rows;
      if (y < 0) y += rows;
      return shared[static_cast<std::size_t>(y) * cols + x];
    }
  }
  return 0;
}

NeighborView view_from(const std::vector<word_t>& shared, int cols, int rows, int x, int y,
                       BoundaryPolicy policy) {
  NeighborView v;
  for (int k = 0; k < 8; ++k)
    v.values[k] = sample_shared(shared, cols, rows, x + kNeighborDx[k], y + kNeighborDy[k], policy);
  return v;
}

} // namespace

NeighborView neighbor_view(const ArrayState& state, int x, int y) {
  if (x < 0 || x >= state.config.cols || y < 0 || y >= state.config.rows)
    throw std::invalid_argument("PE coordinates out of grid");
  std::vector<word_t> shared(state.grid.size());
  for (std::size_t i = 0; i < state.grid.size(); ++i) shared[i] = state.grid[i].shared_current;
  return view_from(shared, state.config.cols, state.config.rows, x, y, state.config.boundary);
}

void step_with_order(ArrayState& state, std::span<const int> order, RunStats* stats,
                     std::vector<TraceEvent>* trace) {
  if (state.all_halted()) return;
  const int cols = state.config.cols;
  const int rows = state.config.rows;

  // phase 1: snapshot every shared register, then step PEs against it
  std::vector<word_t> shared(state.grid.size());
  for (std::size_t i = 0; i < state.grid.size(); ++i) shared[i] = state.grid[i].shared_current;

  std::vector<TraceEvent> events;
  if (trace) events.resize(state.grid.size());
  std::vector<bool> traced(trace ? state.grid.size() : 0, false);

  for (int idx : order) {
    PEState& pe = state.grid[static_cast<std::size_t>(idx)];
    if (pe.halted) continue;
    const Program& prog = state.config.groups[state.group_of[idx]].program;
    const Move& move = prog.moves[pe.pc];
    NeighborView view = view_from(shared, cols, rows, pe.x, pe.y, state.config.boundary);
    MoveOutcome outcome;
    pe = pe_step(pe, move, view, &outcome);
    if (pe.pc >= prog.moves.size()) pe.halted = true;  // ran past the end
    if (stats) {
      ++(outcome.executed ? stats->executed_moves : stats->squashed_moves);
    }
    if (trace) {
      events[idx] = {state.cycle, state.group_of[idx], pe.x, pe.y,
                     outcome.executed, move, outcome.bus_value};
      traced[idx] = true;
    }
  }

  // phase 2: commit pending shared writes
  for (PEState& pe : state.grid) {
    if (pe.shared_dirty) {
      pe.shared_current = pe.shared_pending;
      pe.shared_dirty = false;
    }
  }
  state.cycle += 1;

  if (trace) {
    // deterministic ordering regardless of visit order: y, then x (row major)
    for (std::size_t i = 0; i < events.size(); ++i)
      if (traced[i]) trace->push_back(events[i]);
  }
}

void step(ArrayState& state, RunStats* stats, std::vector<TraceEvent>* trace) {
  std::vector<int> order(state.grid.size());
  std::iota(order.begin(), order.end(), 0);
  step_with_order(state, order, stats, trace);
}

RunStats run(ArrayState& state, std::uint64_t max_cycles, std::vector<TraceEvent>* trace) {
  RunStats stats;
  while (!state.all_halted() && stats.cycles < max_cycles) {
    step(state, &stats, trace);
    ++stats.cycles;
  }
  stats.cutoff = !state.all_halted();
  stats.halted_pe_count =
      static_cast<int>(std::count_if(state.grid.begin(), state.grid.end(),
                                     [](const PEState& pe) { return pe.halted; }));
  return stats;
}

void load_image_flat(ArrayState& state, const ImagePlane& img) {
  if (img.width != state.config.cols || img.height != state.config.rows)
    throw DimensionError("image is " + std::to_string(img.width) + "x" +
                         std::to_string(img.height) + " but the grid is " +
                         std::to_string(state.config.cols) + "x" +
                         std::to_string(state.config.rows));
  for (int y = 0; y < state.config.rows; ++y) {
    for (int x = 0; x < state.config.cols; ++x) {
      PEState& pe = state.pe(x, y);
      pe.shared_current = img.at(x, y);
      pe.gpr[0] = img.at(x, y);
    }
  }
}

std::uint64_t load_image_wave(ArrayState& state, const ImagePlane& img) {
  if (img.width != state.config.cols || img.height != state.config.rows)
    throw DimensionError("image is " + std::to_string(img.width) + "x" +
                         std::to_string(img.height) + " but the grid is " +
                         std::to_string(state.config.cols) + "x" +
                         std::to_string(state.config.rows));
  const int cols = state.config.cols;
  const int rows = state.config.rows;
  // columns enter east-most first; each cycle the plane shifts one step east
  for (int t = 0; t < cols; ++t) {
    for (int y = 0; y < rows; ++y) {
      for (int x = cols - 1; x > 0; --x)
        state.pe(x, y).shared_current = state.pe(x - 1, y).shared_current;
      state.pe(0, y).shared_current = img.at(cols - 1 - t, y);
    }
  }
  for (PEState& pe : state.grid) pe.gpr[0] = pe.shared_current;
  return static_cast<std::uint64_t>(cols);
}

ImagePlane read_plane(const ArrayState& state, PlaneSource source) {
  ImagePlane out(state.config.cols, state.config.rows);
  for (int y = 0; y < state.config.rows; ++y)
    for (int x = 0; x < state.config.cols; ++x)
      out.at(x, y) = source.is_shared ? state.pe(x, y).shared_current
                                      : state.pe(x, y).gpr[source.gpr_index];
  return out;
}

int fovea_window_count(int image_extent, int grid_extent, int halo) {
  int step = grid_extent - 2 * halo;
  if (step <= 0) throw std::invalid_argument("halo too large for the grid");
  int span = image_extent - 2 * halo;
  if (span <= 0) return 1;
  return (span + step - 1) / step;
}

FoveaResult run_fovea(const ImagePlane& img, const ArrayConfig& config, int halo,
                      std::uint64_t max_cycles, PlaneSource source) {
  if (halo < 0 || 2 * halo >= std::min(config.rows, config.cols))
    throw std::invalid_argument("halo too large for the grid");
  const int step_x = config.cols - 2 * halo;
  const int step_y = config.rows - 2 * halo;
  const int nwx = fovea_window_count(img.width, config.cols, halo);
  const int nwy = fovea_window_count(img.height, config.rows, halo);

  FoveaResult result;
  result.plane = ImagePlane(img.width, img.height);
  result.windows_x = nwx;
  result.windows_y = nwy;

  ImagePlane window(config.cols, config.rows);
  for (int wy = 0; wy < nwy; ++wy) {
    for (int wx = 0; wx < nwx; ++wx) {
      const int ox = wx * step_x;
      const int oy = wy * step_y;
      for (int y = 0; y < config.rows; ++y)
        for (int x = 0; x < config.cols; ++x)
          window.at(x, y) = img.sample(ox + x, oy + y, config.boundary);

      ArrayState state = init_array(config);
      result.stats.load_cycles += load_image_wave(state, window);
      RunStats rs = run(state, max_cycles);
      result.stats.cycles += rs.cycles;
      result.stats.executed_moves += rs.executed_moves;
      result.stats.squashed_moves += rs.squashed_moves;
      result.stats.halted_pe_count = rs.halted_pe_count;
      result.stats.cutoff = result.stats.cutoff || rs.cutoff;

      ImagePlane out = read_plane(state, source);
      // halo outputs are discarded except where the window meets the image edge
      int lo_x = wx == 0 ? 0 : ox + halo;
      int hi_x = std::min(wx == nwx - 1 ? ox + config.cols : ox + config.cols - halo, img.width);
      int lo_y = wy == 0 ? 0 : oy + halo;
      int hi_y = std::min(wy == nwy - 1 ? oy + config.rows : oy + config.rows - halo, img.height);
      for (int y = lo_y; y < hi_y; ++y)
        for (int x = lo_x; x < hi_x; ++x)
          result.plane.at(x, y) = out.at(x - ox, y - oy);
    }
  }
  return result;
}

std::string format_trace_event(const TraceEvent& ev) {
  std::string s = std::to_string(ev.cycle);
  s += " g" + std::to_string(ev.group);
  s += " (" + std::to_string(ev.x) + "," + std::to_string(ev.y) + ")";
  s += ev.executed ? " E" : " S";
  s += " bus=" + std::to_string(ev.bus_value);
  s += " " + disassemble_move(ev.move);
  return s;
}

} // namespace meshtta
