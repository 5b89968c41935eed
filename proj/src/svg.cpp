#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vhcm {

namespace {

constexpr double kW = 640.0, kH = 420.0;
constexpr double kL = 70.0, kR = 20.0, kT = 40.0, kB = 50.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

struct Frame {
    double x_min = 0, x_max = 1, y_min = 0, y_max = 1;
    bool log_y = false;

    double tx(double x) const { return kL + (x - x_min) / (x_max - x_min) * (kW - kL - kR); }
    double ty(double y) const {
        double v = log_y ? std::log10(std::max(y, 1e-300)) : y;
        return kH - kB - (v - y_min) / (y_max - y_min) * (kH - kT - kB);
    }
};

void open_svg(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
       << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" "
          "text-anchor=\"middle\">"
       << escape(title) << "</text>\n";
}

void draw_axes(std::ostringstream& os, const Frame& fr, const std::string& x_label,
               const std::string& y_label) {
    os << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\""
       << kH - kT - kB << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double fx = fr.x_min + (fr.x_max - fr.x_min) * i / 4.0;
        double px = fr.tx(fx);
        os << "<line x1=\"" << px << "\" y1=\"" << kH - kB << "\" x2=\"" << px << "\" y2=\"" << kH - kB + 5
           << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << px << "\" y=\"" << kH - kB + 18
           << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << num(fx)
           << "</text>\n";
        double fy = fr.y_min + (fr.y_max - fr.y_min) * i / 4.0;
        double py = kH - kB - (kH - kT - kB) * i / 4.0;
        os << "<line x1=\"" << kL - 5 << "\" y1=\"" << py << "\" x2=\"" << kL << "\" y2=\"" << py
           << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << kL - 8 << "\" y=\"" << py + 4
           << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
           << (fr.log_y ? "1e" + num(fy) : num(fy)) << "</text>\n";
    }
    os << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 12
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << escape(x_label)
       << "</text>\n";
    os << "<text x=\"16\" y=\"" << (kT + kH - kB) / 2
       << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << (kT + kH - kB) / 2 << ")\">" << escape(y_label) << "</text>\n";
}

}  // namespace

void write_line_plot(const std::string& path, const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<Series>& series, bool log_y) {
    if (series.empty()) throw std::invalid_argument("plot: no series");
    Frame fr;
    fr.log_y = log_y;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            double y = log_y ? std::log10(std::max(s.y[i], 1e-300)) : s.y[i];
            if (first) {
                fr.x_min = fr.x_max = s.x[i];
                fr.y_min = fr.y_max = y;
                first = false;
            }
            fr.x_min = std::min(fr.x_min, s.x[i]);
            fr.x_max = std::max(fr.x_max, s.x[i]);
            fr.y_min = std::min(fr.y_min, y);
            fr.y_max = std::max(fr.y_max, y);
        }
    }
    if (fr.x_max == fr.x_min) fr.x_max = fr.x_min + 1.0;
    if (fr.y_max == fr.y_min) fr.y_max = fr.y_min + 1.0;
    double pad = 0.05 * (fr.y_max - fr.y_min);
    fr.y_min -= pad;
    fr.y_max += pad;

    std::ostringstream os;
    open_svg(os, title);
    draw_axes(os, fr, x_label, y_label);
    double legend_y = kT + 14;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            os << num(fr.tx(s.x[i])) << "," << num(fr.ty(s.y[i])) << " ";
        os << "\"/>\n";
        if (s.markers)
            for (std::size_t i = 0; i < s.x.size(); ++i)
                os << "<circle cx=\"" << num(fr.tx(s.x[i])) << "\" cy=\"" << num(fr.ty(s.y[i]))
                   << "\" r=\"2\" fill=\"" << s.color << "\"/>\n";
        if (!s.name.empty()) {
            os << "<line x1=\"" << kW - kR - 130 << "\" y1=\"" << legend_y << "\" x2=\"" << kW - kR - 110
               << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
            os << "<text x=\"" << kW - kR - 105 << "\" y=\"" << legend_y + 4
               << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.name) << "</text>\n";
            legend_y += 16;
        }
    }
    os << "</svg>\n";
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write svg: " + path);
    f << os.str();
}

void write_label_map(const std::string& path, const std::string& title, const std::vector<double>& x,
                     const std::vector<std::uint8_t>& labels) {
    if (x.size() != labels.size() || x.empty()) throw std::invalid_argument("label map: bad input");
    Frame fr;
    fr.x_min = x.front();
    fr.x_max = x.back();
    fr.y_min = -0.15;
    fr.y_max = 1.15;

    std::ostringstream os;
    open_svg(os, title);
    draw_axes(os, fr, "x", "label (0 = local, 1 = nonlocal)");
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        if (labels[i] == 0) continue;
        double x0 = fr.tx(x[i]), x1 = fr.tx(x[i + 1]);
        os << "<rect x=\"" << num(x0) << "\" y=\"" << num(fr.ty(1.0)) << "\" width=\"" << num(x1 - x0)
           << "\" height=\"" << num(fr.ty(0.0) - fr.ty(1.0)) << "\" fill=\"#bbbbbb\"/>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < x.size(); ++i)
        os << num(fr.tx(x[i])) << "," << num(fr.ty(labels[i] ? 1.0 : 0.0)) << " ";
    os << "\"/>\n</svg>\n";
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write svg: " + path);
    f << os.str();
}

void write_confusion_svg(const std::string& path, const std::string& title, const ConfusionMatrix& cm) {
    double lm_total = static_cast<double>(cm.tp + cm.fn);
    double nlm_total = static_cast<double>(cm.tn + cm.fp);
    auto pct = [](double v, double total) { return total == 0.0 ? 0.0 : 100.0 * v / total; };
    double cells[2][2] = {{pct(static_cast<double>(cm.tp), lm_total), pct(static_cast<double>(cm.fn), lm_total)},
                          {pct(static_cast<double>(cm.fp), nlm_total), pct(static_cast<double>(cm.tn), nlm_total)}};
    long counts[2][2] = {{cm.tp, cm.fn}, {cm.fp, cm.tn}};
    const char* row_names[2] = {"actual LM", "actual NLM"};
    const char* col_names[2] = {"predicted LM", "predicted NLM"};

    std::ostringstream os;
    open_svg(os, title);
    const double cell = 140.0, ox = 180.0, oy = 80.0;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            double shade = 235.0 - 1.35 * cells[r][c];
            os << "<rect x=\"" << ox + c * cell << "\" y=\"" << oy + r * cell << "\" width=\"" << cell
               << "\" height=\"" << cell << "\" fill=\"rgb(" << static_cast<int>(shade) << ","
               << static_cast<int>(shade) << ",235)\" stroke=\"#444\"/>\n";
            os << "<text x=\"" << ox + c * cell + cell / 2 << "\" y=\"" << oy + r * cell + cell / 2 - 6
               << "\" font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">" << num(cells[r][c])
               << "%</text>\n";
            os << "<text x=\"" << ox + c * cell + cell / 2 << "\" y=\"" << oy + r * cell + cell / 2 + 14
               << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">(" << counts[r][c]
               << ")</text>\n";
        }
        os << "<text x=\"" << ox - 10 << "\" y=\"" << oy + r * cell + cell / 2
           << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"end\">" << row_names[r]
           << "</text>\n";
    }
    for (int c = 0; c < 2; ++c)
        os << "<text x=\"" << ox + c * cell + cell / 2 << "\" y=\"" << oy - 10
           << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">" << col_names[c]
           << "</text>\n";
    os << "</svg>\n";
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write svg: " + path);
    f << os.str();
}

}  // namespace vhcm
