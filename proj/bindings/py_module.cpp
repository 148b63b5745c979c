#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "meshtta/array.hpp"
#include "meshtta/energy.hpp"
#include "meshtta/kernels.hpp"
#include "meshtta/oracle.hpp"
#include "meshtta/pgm.hpp"

namespace py = pybind11;
using namespace meshtta;

namespace {

Kernel3x3 kernel_from_list(const std::vector<int>& weights, unsigned post_shift) {
  if (weights.size() != 9)
    throw std::invalid_argument("expected 9 weights (row major, north row first)");
  Kernel3x3 k;
  for (int i = 0; i < 9; ++i) k.weights[i / 3][i % 3] = weights[i];
  k.post_shift = post_shift;
  return k;
}

ImagePlane plane_from_list(int width, int height, const std::vector<int>& pixels) {
  ImagePlane img(width, height);
  if (pixels.size() != img.pixels.size())
    throw std::invalid_argument("pixel count does not match the dimensions");
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    if (pixels[i] < 0 || pixels[i] > 0xFFFF)
      throw std::invalid_argument("pixel values must fit 16 unsigned bits");
    img.pixels[i] = static_cast<word_t>(pixels[i]);
  }
  return img;
}

py::dict stats_dict(const RunStats& s) {
  py::dict d;
  d["cycles"] = s.cycles;
  d["load_cycles"] = s.load_cycles;
  d["executed_moves"] = s.executed_moves;
  d["squashed_moves"] = s.squashed_moves;
  d["halted_pes"] = s.halted_pe_count;
  d["cutoff"] = s.cutoff;
  return d;
}

PlaneSource plane_source(const std::string& name) {
  if (name == "shared") return PlaneSource::shared();
  if (name.rfind("gpr", 0) == 0 && name.size() == 4 && std::isdigit(name[3]))
    return PlaneSource::gpr(name[3] - '0');
  throw std::invalid_argument("plane must be shared or gpr0..gpr7");
}

py::tuple run_program_py(const Program& program, const ImagePlane& img,
                         const std::string& boundary, const std::string& load,
                         std::uint64_t max_cycles, const std::string& plane) {
  ArrayConfig cfg;
  cfg.cols = img.width;
  cfg.rows = img.height;
  cfg.boundary = boundary_from_name(boundary);
  cfg.groups.push_back({GroupRule::all(), program});
  ArrayState st = init_array(cfg);
  RunStats stats;
  if (load == "wave")
    stats.load_cycles = load_image_wave(st, img);
  else if (load == "flat")
    load_image_flat(st, img);
  else
    throw std::invalid_argument("load must be flat or wave");
  RunStats rs = run(st, max_cycles);
  stats.cycles = rs.cycles;
  stats.executed_moves = rs.executed_moves;
  stats.squashed_moves = rs.squashed_moves;
  stats.halted_pe_count = rs.halted_pe_count;
  stats.cutoff = rs.cutoff;
  return py::make_tuple(read_plane(st, plane_source(plane)), stats_dict(stats));
}

py::tuple run_fovea_py(const Program& program, const ImagePlane& img, int grid_w, int grid_h,
                       int halo, const std::string& boundary, std::uint64_t max_cycles,
                       const std::string& plane) {
  ArrayConfig cfg;
  cfg.cols = grid_w;
  cfg.rows = grid_h;
  cfg.boundary = boundary_from_name(boundary);
  cfg.groups.push_back({GroupRule::all(), program});
  FoveaResult fr = run_fovea(img, cfg, halo, max_cycles, plane_source(plane));
  py::dict stats = stats_dict(fr.stats);
  stats["windows"] = py::make_tuple(fr.windows_x, fr.windows_y);
  return py::make_tuple(fr.plane, stats);
}

py::dict fpga_report_py(int rows, int cols) {
  FpgaReport r = fpga_report(rows, cols);
  py::dict d;
  d["n_pe"] = r.n_pe;
  d["static_mw"] = r.static_mw;
  d["dynamic_mw"] = r.dynamic_mw;
  d["total_mw"] = r.total_mw;
  d["reported_total_mw"] = r.reported_total_mw;
  d["total_matches_reported"] = r.total_matches_reported;
  d["logic_cells_cores"] = r.logic_cells_cores;
  d["logic_cells_estimate"] = r.logic_cells_estimate;
  return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "cycle-accurate mesh-TTA array simulator";

  py::class_<ImagePlane>(m, "ImagePlane")
      .def(py::init<int, int, word_t>(), py::arg("width"), py::arg("height"), py::arg("fill") = 0)
      .def_static("from_list", &plane_from_list, py::arg("width"), py::arg("height"),
                  py::arg("pixels"))
      .def_readonly("width", &ImagePlane::width)
      .def_readonly("height", &ImagePlane::height)
      .def("tolist",
           [](const ImagePlane& img) {
             return std::vector<int>(img.pixels.begin(), img.pixels.end());
           })
      .def("at", [](const ImagePlane& img, int x, int y) { return img.at(x, y); })
      .def("__eq__", [](const ImagePlane& a, const ImagePlane& b) { return a == b; })
      .def("__repr__", [](const ImagePlane& img) {
        return "<ImagePlane " + std::to_string(img.width) + "x" + std::to_string(img.height) + ">";
      });

  py::class_<Program>(m, "Program")
      .def_readonly("name", &Program::name)
      .def("__len__", [](const Program& p) { return p.moves.size(); })
      .def("__repr__", [](const Program& p) {
        return "<Program " + (p.name.empty() ? "?" : p.name) + ", " +
               std::to_string(p.moves.size()) + " moves>";
      });

  py::class_<KernelProgramReport>(m, "KernelReport")
      .def_readonly("program", &KernelProgramReport::program)
      .def_readonly("predicted_cycles", &KernelProgramReport::predicted_cycles)
      .def_readonly("registers_used", &KernelProgramReport::registers_used)
      .def_readonly("bool_registers_used", &KernelProgramReport::bool_registers_used);

  m.def("assemble", [](const std::string& text, const std::string& name) {
          return parse_program(text, name);
        },
        py::arg("text"), py::arg("name") = "");
  m.def("disassemble", &disassemble);
  m.def("to_binary", [](const Program& p) {
    auto bytes = to_binary(p);
    return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  });
  m.def("from_binary", [](const py::bytes& data, const std::string& name) {
          std::string s = data;
          return from_binary(std::vector<std::uint8_t>(s.begin(), s.end()), name);
        },
        py::arg("data"), py::arg("name") = "");
  m.def("predicted_cycles", &predicted_cycles);

  m.def("lbp3x3", &lbp3x3_program);
  m.def("conv3x3", [](const std::vector<int>& weights, unsigned post_shift) {
          return conv3x3_program(kernel_from_list(weights, post_shift));
        },
        py::arg("weights"), py::arg("post_shift") = 0);
  m.def("maxpool", &maxpool_program, py::arg("window"), py::arg("stride"));
  m.def("kernel_by_name", &kernel_by_name);
  m.def("builtin_kernel_names", &builtin_kernel_names);

  m.def("run_program", &run_program_py, py::arg("program"), py::arg("image"),
        py::arg("boundary") = "zero", py::arg("load") = "flat",
        py::arg("max_cycles") = std::uint64_t{1} << 20, py::arg("plane") = "gpr3");
  m.def("run_fovea", &run_fovea_py, py::arg("program"), py::arg("image"), py::arg("grid_w"),
        py::arg("grid_h"), py::arg("halo"), py::arg("boundary") = "zero",
        py::arg("max_cycles") = std::uint64_t{1} << 20, py::arg("plane") = "gpr3");

  m.def("lbp_ref", [](const ImagePlane& img, const std::string& boundary) {
          return lbp_ref(img, boundary_from_name(boundary));
        },
        py::arg("image"), py::arg("boundary") = "zero");
  m.def("conv3x3_ref", [](const ImagePlane& img, const std::vector<int>& weights,
                          unsigned post_shift, const std::string& boundary) {
          return conv3x3_ref(img, kernel_from_list(weights, post_shift),
                             boundary_from_name(boundary));
        },
        py::arg("image"), py::arg("weights"), py::arg("post_shift") = 0,
        py::arg("boundary") = "zero");
  m.def("maxpool_ref", [](const ImagePlane& img, int window, unsigned stride,
                          const std::string& boundary) {
          return maxpool_ref(img, window, stride, boundary_from_name(boundary));
        },
        py::arg("image"), py::arg("window"), py::arg("stride"), py::arg("boundary") = "zero");

  m.def("asic_corner_names", [] {
    std::vector<std::string> names;
    for (const AsicCorner& c : asic_corners()) names.push_back(c.name);
    return names;
  });
  m.def("static_power_w", [](const std::string& corner, double hz) {
    return static_power_w(find_corner(corner), hz);
  });
  m.def("dynamic_power_w", [](const std::string& corner, double hz) {
    return dynamic_power_w(find_corner(corner), hz);
  });
  m.def("program_energy_j", [](const std::string& corner, double hz, std::uint64_t cycles,
                               std::uint64_t n_pe) {
    return program_energy_j(find_corner(corner), hz, cycles, n_pe);
  });
  m.def("average_frame_power_w",
        [](const std::string& corner, std::uint64_t cycles, double freq_hz, double frame_rate,
           const std::string& sleep, std::uint64_t n_pe) {
          DutyCycle duty{cycles, freq_hz, frame_rate, sleep_mode_from_name(sleep)};
          return average_frame_power_w(find_corner(corner), duty, n_pe);
        },
        py::arg("corner"), py::arg("cycles"), py::arg("freq_hz"), py::arg("frame_rate"),
        py::arg("sleep") = "clock", py::arg("n_pe") = 1);
  m.def("area_mm2", &area_mm2, py::arg("rows"), py::arg("cols"));
  m.def("fpga_report", &fpga_report_py, py::arg("rows"), py::arg("cols"));
  m.def("fpga_program_energy_j", &fpga_program_energy_j, py::arg("cycles"), py::arg("n_pe") = 1);
  m.def("calibration_table_text", &calibration_table_text);

  m.def("read_pgm", &read_pgm_file, py::arg("path"));
  m.def("write_pgm", &write_pgm_file, py::arg("image"), py::arg("path"),
        py::arg("ascii") = false);
}
