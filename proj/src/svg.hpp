// Small deterministic SVG plot writer; no display device involved.
#pragma once

#include <string>
#include <vector>

#include "metrics.hpp"

namespace vhcm {

struct Series {
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    std::string name;
    bool markers = false;
};

void write_line_plot(const std::string& path, const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<Series>& series, bool log_y = false);

/// Per-node 0/1 labels drawn as a filled step band.
void write_label_map(const std::string& path, const std::string& title, const std::vector<double>& x,
                     const std::vector<std::uint8_t>& labels);

/// 2x2 percentage-annotated confusion matrix.
void write_confusion_svg(const std::string& path, const std::string& title, const ConfusionMatrix& cm);

}  // namespace vhcm
