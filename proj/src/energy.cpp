#include "meshtta/energy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace meshtta {

namespace {
constexpr double uw = 1e-6;

void check_frequency(double freq_hz) {
  if (!(freq_hz > 0) || freq_hz > kMaxModelFreqHz)
    throw std::invalid_argument("frequency out of modeled range (0, 200 MHz]");
}

int nearest_tab_index(double freq_hz) {
  int best = 0;
  double best_dist = std::abs(freq_hz - kTabulatedFreqHz[0]);
  for (int i = 1; i < 3; ++i) {
    double d = std::abs(freq_hz - kTabulatedFreqHz[i]);
    if (d < best_dist) {  // ties resolve to the lower frequency
      best = i;
      best_dist = d;
    }
  }
  return best;
}

int exact_tab_index(double freq_hz) {
  for (int i = 0; i < 3; ++i)
    if (freq_hz == kTabulatedFreqHz[i]) return i;
  return -1;
}
} // namespace

const std::vector<AsicCorner>& asic_corners() {
  static const std::vector<AsicCorner> corners = {
      {"0.8V25C", 0.8, 25,
       {0.7 * uw, 0.68 * uw, 0.55 * uw},
       {1.76 * uw, 17.51 * uw, 184 * uw}},
      {"0.6V125C", 0.6, 125,
       {8.2 * uw, 8.0 * uw, 8.1 * uw},
       {0.96 * uw, 10.4 * uw, 101 * uw}},
      {"0.8V125C", 0.8, 125,
       {15.1 * uw, 15.5 * uw, 15.2 * uw},
       {1.8 * uw, 19.1 * uw, 186 * uw}},
  };
  return corners;
}

const AsicCorner& find_corner(const std::string& name) {
  std::string n;
  for (char c : name) n.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  for (const AsicCorner& corner : asic_corners())
    if (corner.name == n) return corner;
  std::string known;
  for (const AsicCorner& corner : asic_corners()) known += " " + corner.name;
  throw std::invalid_argument("unknown corner '" + name + "' (known:" + known + ")");
}

double anchor_linear_dynamic_w(const AsicCorner& corner, double freq_hz) {
  check_frequency(freq_hz);
  return corner.dynamic_w[1] * freq_hz / kTabulatedFreqHz[1];
}

double dynamic_power_w(const AsicCorner& corner, double freq_hz) {
  check_frequency(freq_hz);
  if (int i = exact_tab_index(freq_hz); i >= 0) return corner.dynamic_w[i];
  return anchor_linear_dynamic_w(corner, freq_hz);
}

double static_power_w(const AsicCorner& corner, double freq_hz) {
  check_frequency(freq_hz);
  return corner.static_w[nearest_tab_index(freq_hz)];
}

double program_energy_j(const AsicCorner& corner, double freq_hz, std::uint64_t cycles,
                        std::uint64_t n_pe) {
  if (cycles == 0) throw std::invalid_argument("cycle count must be positive");
  double per_pe = static_power_w(corner, freq_hz) + dynamic_power_w(corner, freq_hz);
  return static_cast<double>(n_pe) * per_pe * static_cast<double>(cycles) / freq_hz;
}

SleepMode sleep_mode_from_name(const std::string& name) {
  std::string n;
  for (char c : name) n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (n == "clock" || n == "clock_gated") return SleepMode::ClockGated;
  if (n == "power" || n == "power_gated") return SleepMode::PowerGated;
  throw std::invalid_argument("unknown sleep mode '" + name + "' (expected clock or power)");
}

double average_frame_power_w(const AsicCorner& corner, const DutyCycle& duty,
                             std::uint64_t n_pe) {
  if (duty.cycles_per_frame == 0) throw std::invalid_argument("cycles per frame must be positive");
  if (!(duty.frame_rate_hz > 0)) throw std::invalid_argument("frame rate must be positive");
  check_frequency(duty.frequency_hz);
  double active = static_cast<double>(duty.cycles_per_frame) * duty.frame_rate_hz /
                  duty.frequency_hz;
  if (active > 1.0)
    throw std::invalid_argument("the frame's work does not fit the frame interval");
  double p_static = static_power_w(corner, duty.frequency_hz);
  double p_active = p_static + dynamic_power_w(corner, duty.frequency_hz);
  double p_sleep = duty.sleep == SleepMode::ClockGated ? p_static : 0.0;
  return static_cast<double>(n_pe) * (active * p_active + (1.0 - active) * p_sleep);
}

double area_mm2(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("array must have at least one PE");
  return static_cast<double>(rows) * cols * kPeSideMm * kPeSideMm;
}

FpgaReport fpga_report(int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("array must have at least one PE");
  FpgaReport r;
  r.n_pe = rows * cols;
  r.static_mw = kFpgaStaticMw;
  const double interconnect_mw = kFpgaArrayDynamicMw - 110 * kFpgaCoreDynamicMw;  // 3.79
  r.dynamic_mw = r.n_pe * kFpgaCoreDynamicMw + interconnect_mw;
  r.total_mw = r.static_mw + r.dynamic_mw;
  r.reported_total_mw = kFpgaReportedTotalMw;
  r.total_matches_reported = std::abs(r.total_mw - kFpgaReportedTotalMw) < 0.005;
  r.logic_cells_cores = static_cast<std::int64_t>(r.n_pe) * kFpgaLogicCellsPerCore;
  const std::int64_t cell_residual = kFpga10x11LogicCells - 110LL * kFpgaLogicCellsPerCore;  // 683
  r.logic_cells_estimate = r.logic_cells_cores + cell_residual;
  return r;
}

double fpga_program_energy_j(std::uint64_t cycles, std::uint64_t n_pe) {
  if (cycles == 0) throw std::invalid_argument("cycle count must be positive");
  return static_cast<double>(n_pe) * (kFpgaCoreDynamicMw * 1e-3) *
         static_cast<double>(cycles) / kFpgaClockHz;
}

std::string calibration_table_text() {
  std::string out =
      "# per-PE ASIC power calibration (28 nm post-layout)\n"
      "# corner voltage_v temp_c freq_mhz static_uw dynamic_uw\n";
  char line[128];
  for (const AsicCorner& c : asic_corners()) {
    for (int i = 0; i < 3; ++i) {
      std::snprintf(line, sizeof line, "%s %g %g %g %g %g\n", c.name.c_str(), c.voltage_v,
                    c.temperature_c, kTabulatedFreqHz[i] / 1e6, c.static_w[i] / uw,
                    c.dynamic_w[i] / uw);
      out += line;
    }
  }
  return out;
}

} // namespace meshtta
