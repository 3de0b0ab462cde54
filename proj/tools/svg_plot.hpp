#pragma once

#include "lmmsel/model.hpp"

#include <string>
#include <vector>

namespace lmmsel::cli {

struct PathPlot {
  Vector lambdas;                   // one entry per row of coefficients
  Matrix coefficients;              // lambdas.size() x p
  std::vector<std::string> names;   // length p
  std::vector<bool> highlighted;    // length p, drawn in colour and labelled
  int marker_index = -1;            // row of the BIC minimizer, -1 for none
  std::string metadata;             // embedded verbatim (escaped) in <metadata>
};

/// Coefficient trajectories against log10(lambda) with a dashed vertical
/// marker (id "bic-min") at marker_index.
std::string render_path_svg(const PathPlot& plot);

}  // namespace lmmsel::cli
