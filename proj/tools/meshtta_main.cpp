// meshtta: assemble/disassemble transport programs, run kernels on images,
// check results against the scalar references, and report power/energy/area.
//
// Exit codes: 0 ok, 1 usage/parse error, 2 runtime error (dimensions,
// cycle cutoff), 3 oracle check mismatch.

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <tuple>

#include "CLI11.hpp"
#include "json.hpp"

#include "meshtta/array.hpp"
#include "meshtta/energy.hpp"
#include "meshtta/kernels.hpp"
#include "meshtta/oracle.hpp"
#include "meshtta/pgm.hpp"

using namespace meshtta;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitMismatch = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

std::pair<int, int> parse_dims(const std::string& text) {
  auto x = text.find('x');
  if (x == std::string::npos) x = text.find('X');
  if (x == std::string::npos) throw CLI::ValidationError("dims", "expected WIDTHxHEIGHT");
  int w = std::stoi(text.substr(0, x));
  int h = std::stoi(text.substr(x + 1));
  if (w < 1 || h < 1) throw CLI::ValidationError("dims", "dimensions must be positive");
  return {w, h};
}

Program load_program_file(const std::string& path) {
  std::string data = read_file(path);
  if (data.size() >= 4 && data.compare(0, 4, "TTAM") == 0) {
    std::vector<std::uint8_t> bytes(data.begin(), data.end());
    return from_binary(bytes, path);
  }
  return parse_program(data, path);
}

struct RunOptions {
  std::string kernel;
  std::string program_path;
  std::string image_path;
  std::string grid;
  std::string boundary = "zero";
  std::string load = "flat";
  std::string plane = "gpr3";
  std::string out_path;
  std::string trace_path;
  std::string weights;
  std::string corner;
  std::string sleep = "clock";
  unsigned post_shift = 0;
  int window = 2;
  unsigned stride = 2;
  int halo = -1;
  std::uint64_t max_cycles = 1u << 20;
  double freq_hz = 10e6;
  double frame_rate = 0;
  bool check = false;
  bool trace = false;
  bool ascii = false;
};

PlaneSource parse_plane(const std::string& name) {
  if (name == "shared") return PlaneSource::shared();
  if (name.rfind("gpr", 0) == 0 && name.size() == 4 && std::isdigit(name[3]))
    return PlaneSource::gpr(name[3] - '0');
  throw CLI::ValidationError("plane", "expected shared or gpr0..gpr7");
}

Kernel3x3 parse_weights(const std::string& text, unsigned post_shift) {
  Kernel3x3 k;
  std::istringstream iss(text);
  std::string tok;
  int i = 0;
  while (std::getline(iss, tok, ',')) {
    if (i >= 9) throw CLI::ValidationError("weights", "expected 9 comma-separated integers");
    k.weights[i / 3][i % 3] = std::stoi(tok);
    ++i;
  }
  if (i != 9) throw CLI::ValidationError("weights", "expected 9 comma-separated integers");
  k.post_shift = post_shift;
  return k;
}

struct ResolvedKernel {
  Program program;
  // oracle for --check; empty when running a raw program file
  std::function<ImagePlane(const ImagePlane&, BoundaryPolicy)> oracle;
};

ResolvedKernel resolve_program(const RunOptions& opt) {
  ResolvedKernel rk;
  if (!opt.program_path.empty()) {
    rk.program = load_program_file(opt.program_path);
    return rk;
  }
  if (opt.kernel == "conv3x3") {
    if (opt.weights.empty())
      throw CLI::ValidationError("kernel", "conv3x3 needs --weights w00,w01,...,w22");
    Kernel3x3 k = parse_weights(opt.weights, opt.post_shift);
    rk.program = conv3x3_program(k).program;
    rk.oracle = [k](const ImagePlane& img, BoundaryPolicy b) { return conv3x3_ref(img, k, b); };
  } else if (opt.kernel == "maxpool") {
    int window = opt.window;
    unsigned stride = opt.stride;
    rk.program = maxpool_program(window, stride).program;
    rk.oracle = [window, stride](const ImagePlane& img, BoundaryPolicy b) {
      return maxpool_ref(img, window, stride, b);
    };
  } else if (opt.kernel == "lbp3x3") {
    rk.program = lbp3x3_program().program;
    rk.oracle = [](const ImagePlane& img, BoundaryPolicy b) { return lbp_ref(img, b); };
  } else {
    rk.program = kernel_by_name(opt.kernel).program;  // sobel_x, sobel_y, box_blur
    Kernel3x3 k = opt.kernel == "sobel_x"   ? sobel_x_kernel()
                  : opt.kernel == "sobel_y" ? sobel_y_kernel()
                                            : box_blur_kernel();
    rk.oracle = [k](const ImagePlane& img, BoundaryPolicy b) { return conv3x3_ref(img, k, b); };
  }
  return rk;
}

json energy_record(const AsicCorner* corner, bool fpga, double freq_hz, std::uint64_t cycles,
                   std::uint64_t n_pe, int rows, int cols, double frame_rate, SleepMode sleep) {
  json e;
  if (fpga) {
    FpgaReport r = fpga_report(rows, cols);
    e["corner"] = "fpga";
    e["clock_hz"] = kFpgaClockHz;
    e["static_mw"] = r.static_mw;
    e["dynamic_mw"] = r.dynamic_mw;
    e["total_mw"] = r.total_mw;
    e["reported_total_mw"] = r.reported_total_mw;
    e["total_matches_reported"] = r.total_matches_reported;
    e["logic_cells_cores"] = r.logic_cells_cores;
    e["logic_cells_estimate"] = r.logic_cells_estimate;
    if (cycles > 0) {
      e["energy_j"] = fpga_program_energy_j(cycles, n_pe);
      e["energy_per_pixel_j"] = fpga_program_energy_j(cycles, 1);
    }
  } else {
    e["corner"] = corner->name;
    e["frequency_hz"] = freq_hz;
    e["static_w_per_pe"] = static_power_w(*corner, freq_hz);
    e["dynamic_w_per_pe"] = dynamic_power_w(*corner, freq_hz);
    e["array_power_w"] =
        n_pe * (static_power_w(*corner, freq_hz) + dynamic_power_w(*corner, freq_hz));
    if (cycles > 0) {
      e["energy_j"] = program_energy_j(*corner, freq_hz, cycles, n_pe);
      e["energy_per_pixel_j"] = program_energy_j(*corner, freq_hz, cycles, 1);
      e["runtime_s"] = cycles / freq_hz;
    }
    if (frame_rate > 0) {
      DutyCycle duty{cycles, freq_hz, frame_rate, sleep};
      e["average_frame_power_w"] = average_frame_power_w(*corner, duty, n_pe);
      e["sleep"] = sleep == SleepMode::ClockGated ? "clock" : "power";
    }
  }
  e["area_mm2"] = area_mm2(rows, cols);
  return e;
}

int cmd_run(const RunOptions& opt) {
  ResolvedKernel rk = resolve_program(opt);
  ImagePlane img = read_pgm_file(opt.image_path);
  BoundaryPolicy boundary = boundary_from_name(opt.boundary);

  int grid_w = img.width, grid_h = img.height;
  if (!opt.grid.empty()) std::tie(grid_w, grid_h) = parse_dims(opt.grid);

  ArrayConfig cfg;
  cfg.cols = grid_w;
  cfg.rows = grid_h;
  cfg.boundary = boundary;
  cfg.trace_enabled = opt.trace;
  cfg.groups.push_back({GroupRule::all(), rk.program});

  const bool fovea = img.width > grid_w || img.height > grid_h;
  if (fovea && opt.halo < 0)
    throw DimensionError("image exceeds the grid; pass --halo to sweep it fovea-style");

  json record;
  record["command"] = "run";
  record["program"] = rk.program.name.empty() ? opt.kernel : rk.program.name;
  record["grid"] = std::to_string(grid_w) + "x" + std::to_string(grid_h);
  record["image"] = std::to_string(img.width) + "x" + std::to_string(img.height);
  record["boundary"] = boundary_name(boundary);

  ImagePlane result;
  RunStats stats;
  std::vector<TraceEvent> trace;
  std::vector<TraceEvent>* trace_sink = opt.trace ? &trace : nullptr;

  if (fovea) {
    FoveaResult fr = run_fovea(img, cfg, opt.halo, opt.max_cycles, parse_plane(opt.plane));
    result = std::move(fr.plane);
    stats = fr.stats;
    record["windows"] = {fr.windows_x, fr.windows_y};
    record["halo"] = opt.halo;
    record["load"] = "wave";
  } else {
    ArrayState st = init_array(cfg);
    if (opt.load == "wave")
      stats.load_cycles = load_image_wave(st, img);
    else
      load_image_flat(st, img);
    RunStats rs = run(st, opt.max_cycles, trace_sink);
    stats.cycles = rs.cycles;
    stats.executed_moves = rs.executed_moves;
    stats.squashed_moves = rs.squashed_moves;
    stats.halted_pe_count = rs.halted_pe_count;
    stats.cutoff = rs.cutoff;
    result = read_plane(st, parse_plane(opt.plane));
    record["load"] = opt.load;
  }

  record["cycles"] = stats.cycles;
  record["load_cycles"] = stats.load_cycles;
  record["executed_moves"] = stats.executed_moves;
  record["squashed_moves"] = stats.squashed_moves;
  record["halted_pes"] = stats.halted_pe_count;
  record["cutoff"] = stats.cutoff;

  if (!opt.corner.empty()) {
    bool fpga = opt.corner == "fpga" || opt.corner == "FPGA";
    const AsicCorner* corner = fpga ? nullptr : &find_corner(opt.corner);
    record["energy"] = energy_record(corner, fpga, opt.freq_hz, stats.cycles,
                                     static_cast<std::uint64_t>(grid_w) * grid_h, grid_h, grid_w,
                                     opt.frame_rate, sleep_mode_from_name(opt.sleep));
  }

  int exit_code = kExitOk;
  if (opt.check) {
    if (!rk.oracle) throw CLI::ValidationError("check", "--check needs a named kernel");
    ImagePlane expect = rk.oracle(img, boundary);
    long mismatches = 0;
    int x0 = 0, y0 = 0, x1 = img.width, y1 = img.height;
    if (fovea) {  // border pixels are best-effort under fovea; check the interior
      x0 = y0 = opt.halo;
      x1 -= opt.halo;
      y1 -= opt.halo;
    }
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x)
        if (result.at(x, y) != expect.at(x, y)) ++mismatches;
    record["check"] = mismatches == 0 ? "ok" : "mismatch";
    record["check_mismatches"] = mismatches;
    if (mismatches) exit_code = kExitMismatch;
  }

  if (stats.cutoff && exit_code == kExitOk) exit_code = kExitRuntime;

  if (!opt.out_path.empty()) write_pgm_file(result, opt.out_path, opt.ascii);
  if (opt.trace) {
    std::string text;
    for (const TraceEvent& ev : trace) text += format_trace_event(ev) + "\n";
    if (!opt.trace_path.empty())
      write_file(opt.trace_path, text);
    else
      std::cerr << text;
  }

  std::cout << record.dump() << "\n";
  return exit_code;
}

struct EnergyOptions {
  std::string corner;
  std::string dims = "1x1";
  std::string sleep = "clock";
  double freq_hz = 10e6;
  std::uint64_t cycles = 0;
  double frame_rate = 0;
  bool as_json = false;
  bool dump_calibration = false;
};

int cmd_energy(const EnergyOptions& opt) {
  if (opt.dump_calibration) {
    std::cout << calibration_table_text();
    return kExitOk;
  }
  auto [w, h] = parse_dims(opt.dims);
  bool fpga = opt.corner == "fpga" || opt.corner == "FPGA";
  const AsicCorner* corner = fpga ? nullptr : &find_corner(opt.corner);
  json e = energy_record(corner, fpga, opt.freq_hz, opt.cycles,
                         static_cast<std::uint64_t>(w) * h, h, w, opt.frame_rate,
                         sleep_mode_from_name(opt.sleep));
  e["n_pe"] = static_cast<std::uint64_t>(w) * h;
  if (opt.cycles > 0) e["cycles"] = opt.cycles;
  if (opt.as_json) {
    std::cout << e.dump() << "\n";
  } else {
    for (auto& [key, value] : e.items())
      std::cout << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
                << "\n";
    if (fpga && !e["total_matches_reported"].get<bool>())
      std::cout << "note: reported_total_mw differs from static+dynamic; both are shown\n";
  }
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"cycle-accurate mesh-TTA array simulator and energy model"};
  app.require_subcommand(1);

  // --- asm ---
  std::string asm_in, asm_out;
  CLI::App* asm_cmd = app.add_subcommand("asm", "assemble a .tta source into a TTAM binary");
  asm_cmd->add_option("input", asm_in, "assembly source")->required();
  asm_cmd->add_option("output", asm_out, "binary output path")->required();

  // --- disasm ---
  std::string dis_in, dis_out;
  CLI::App* dis_cmd = app.add_subcommand("disasm", "disassemble a TTAM binary");
  dis_cmd->add_option("input", dis_in, "TTAM binary")->required();
  dis_cmd->add_option("-o,--out", dis_out, "output path (default stdout)");

  // --- run ---
  RunOptions ropt;
  CLI::App* run_cmd = app.add_subcommand("run", "run a program or named kernel on an image");
  run_cmd->add_option("--kernel", ropt.kernel,
                      "built-in kernel: lbp3x3, sobel_x, sobel_y, box_blur, conv3x3, maxpool");
  run_cmd->add_option("--program", ropt.program_path, "program file (.tta text or TTAM binary)");
  run_cmd->add_option("--image", ropt.image_path, "input image (PGM P2/P5)")->required();
  run_cmd->add_option("--grid", ropt.grid, "array dims WxH (default: image size)");
  run_cmd->add_option("--boundary", ropt.boundary, "zero|clamp|wrap (default zero)");
  run_cmd->add_option("--load", ropt.load, "flat|wave (default flat)")
      ->check(CLI::IsMember({"flat", "wave"}));
  run_cmd->add_option("--max-cycles", ropt.max_cycles, "cycle cutoff");
  run_cmd->add_option("--plane", ropt.plane, "result plane: gpr0..gpr7 or shared (default gpr3)");
  run_cmd->add_option("--out", ropt.out_path, "write the result plane as PGM");
  run_cmd->add_flag("--ascii", ropt.ascii, "write PGM as P2 text");
  run_cmd->add_option("--halo", ropt.halo, "fovea halo (enables sweeping larger images)");
  run_cmd->add_option("--weights", ropt.weights, "conv3x3 weights w00,w01,...,w22");
  run_cmd->add_option("--post-shift", ropt.post_shift, "conv3x3 result shift");
  run_cmd->add_option("--window", ropt.window, "maxpool window (2 or 3)");
  run_cmd->add_option("--stride", ropt.stride, "maxpool stride (power of two)");
  run_cmd->add_flag("--check", ropt.check, "compare against the scalar reference");
  run_cmd->add_flag("--trace", ropt.trace, "emit a per-move trace (MESHTTA_TRACE=1 does the same)");
  run_cmd->add_option("--trace-file", ropt.trace_path, "trace output path (default stderr)");
  run_cmd->add_option("--corner", ropt.corner, "add energy figures: corner name or fpga");
  run_cmd->add_option("--freq", ropt.freq_hz, "clock frequency in Hz (default 10e6)");
  run_cmd->add_option("--frame-rate", ropt.frame_rate, "frame rate for average-power figures");
  run_cmd->add_option("--sleep", ropt.sleep, "sleep mode between frames: clock|power");

  // --- energy ---
  EnergyOptions eopt;
  CLI::App* energy_cmd = app.add_subcommand("energy", "power/energy/area report");
  energy_cmd->add_option("--corner", eopt.corner, "corner name (see --dump-calibration) or fpga");
  energy_cmd->add_option("--freq", eopt.freq_hz, "clock frequency in Hz");
  energy_cmd->add_option("--cycles", eopt.cycles, "program length in cycles");
  energy_cmd->add_option("--dims", eopt.dims, "array dims WxH");
  energy_cmd->add_option("--frame-rate", eopt.frame_rate, "frame rate in Hz");
  energy_cmd->add_option("--sleep", eopt.sleep, "sleep mode between frames: clock|power");
  energy_cmd->add_flag("--json", eopt.as_json, "emit a single JSON record");
  energy_cmd->add_flag("--dump-calibration", eopt.dump_calibration,
                       "print the ASIC calibration table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  if (const char* env = std::getenv("MESHTTA_TRACE"); env && std::string(env) == "1")
    ropt.trace = true;

  try {
    if (asm_cmd->parsed()) {
      Program p = parse_program(read_file(asm_in), asm_in);
      auto bytes = to_binary(p);
      write_file(asm_out, std::string(bytes.begin(), bytes.end()));
      std::cout << p.moves.size() << " instructions\n";
      return kExitOk;
    }
    if (dis_cmd->parsed()) {
      std::string data = read_file(dis_in);
      Program p = from_binary(std::vector<std::uint8_t>(data.begin(), data.end()));
      std::string text = disassemble(p);
      if (dis_out.empty())
        std::cout << text;
      else
        write_file(dis_out, text);
      return kExitOk;
    }
    if (run_cmd->parsed()) {
      if (ropt.kernel.empty() == ropt.program_path.empty())
        throw CLI::ValidationError("run", "pass exactly one of --kernel or --program");
      return cmd_run(ropt);
    }
    if (energy_cmd->parsed()) {
      if (eopt.corner.empty() && !eopt.dump_calibration)
        throw CLI::ValidationError("energy", "--corner is required");
      return cmd_energy(eopt);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DecodeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
