#pragma once

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace doslab {

/// 17 significant digits: round-trip exact for IEEE doubles, '.' decimal
/// separator regardless of locale.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

/// RFC-4180 CSV writer (CRLF line endings, numeric fields unquoted).
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot open " + path.string());
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << escape(fields[i]);
    }
    out_ << "\r\n";
  }

 private:
  static std::string escape(const std::string& f) {
    if (f.find_first_of(",\"\r\n") == std::string::npos) return f;
    std::string q = "\"";
    for (char c : f) {
      if (c == '"') q += '"';
      q += c;
    }
    q += '"';
    return q;
  }

  std::ofstream out_;
};

/// Minimal hand-emitted SVG scatter plot with optional overlay polylines.
/// No timestamps or other run-dependent metadata, so outputs are
/// byte-reproducible.
class SvgScatter {
 public:
  SvgScatter(double xmin, double xmax, double ymin, double ymax, int width = 640,
             int height = 640)
      : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax), w_(width), h_(height) {}

  void add_points(const std::vector<std::complex<double>>& pts, const std::string& color,
                  double radius = 2.0) {
    std::ostringstream os;
    for (const auto& p : pts) {
      os << "<circle cx=\"" << format_double(px(p.real())) << "\" cy=\""
         << format_double(py(p.imag())) << "\" r=\"" << format_double(radius)
         << "\" fill=\"" << color << "\"/>\n";
    }
    body_ += os.str();
  }

  void add_polyline(const std::vector<std::complex<double>>& pts, const std::string& color,
                    double stroke = 1.0) {
    std::ostringstream os;
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
       << format_double(stroke) << "\" points=\"";
    for (const auto& p : pts)
      os << format_double(px(p.real())) << ',' << format_double(py(p.imag())) << ' ';
    os << "\"/>\n";
    body_ += os.str();
  }

  void write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
        << "\" viewBox=\"0 0 " << w_ << ' ' << h_ << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<rect x=\"0.5\" y=\"0.5\" width=\"" << (w_ - 1) << "\" height=\"" << (h_ - 1)
        << "\" fill=\"none\" stroke=\"black\"/>\n"
        << body_ << "</svg>\n";
  }

 private:
  double px(double x) const { return (x - xmin_) / (xmax_ - xmin_) * (w_ - 20) + 10; }
  double py(double y) const { return (ymax_ - y) / (ymax_ - ymin_) * (h_ - 20) + 10; }

  double xmin_, xmax_, ymin_, ymax_;
  int w_, h_;
  std::string body_;
};

}  // namespace doslab
