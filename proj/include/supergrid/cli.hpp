#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "supergrid/config.hpp"
#include "supergrid/layout.hpp"

namespace supergrid {

std::string sha256_hex(std::string_view bytes);

struct InputFile {
  std::string role;
  std::string path;
  std::string sha256;
};

/// Matrix, figure spec and the input files they were built from.
struct FigureJob {
  FigureSpec spec;
  LabeledMatrix matrix;
  std::vector<InputFile> inputs;
};

/// load -> order -> cluster for a render run. Smoothing, layout and
/// rendering happen downstream in render_svg.
FigureJob build_figure(const RunConfig& cfg);

/// Block matrix CSV for a smooth run.
std::string smooth_csv(const RunConfig& cfg, std::vector<InputFile>* inputs = nullptr);

/// Runs the command line. `args` excludes the program name. Returns the
/// process exit code: 0 success, 1 internal fault, 2 config error, 3 data error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace supergrid
