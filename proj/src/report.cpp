#include "uvface/error.hpp"
#include "uvface/eval.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace uvface {

namespace {

std::string num(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

}  // namespace

void write_report_csv(const EvalReport& report, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "id,yaw,error\n";
  for (const auto& s : report.samples) out << s.id << ',' << num(s.yaw_degrees) << ',' << num(s.error) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

void write_report_json(const EvalReport& report, const std::string& mode, const std::filesystem::path& path) {
  nlohmann::ordered_json j;
  j["mode"] = mode;
  j["count"] = report.samples.size();
  j["mean"] = report.mean;
  nlohmann::ordered_json buckets;
  for (int b = 0; b < 3; ++b) {
    nlohmann::ordered_json entry;
    entry["count"] = report.bucket_counts[b];
    entry["mean"] = report.bucket_means[b] ? nlohmann::ordered_json(*report.bucket_means[b]) : nullptr;
    buckets[kYawBucketNames[b]] = entry;
  }
  j["buckets"] = buckets;
  if (report.curve) {
    j["cutoff"] = report.curve->cutoff;
    j["auc"] = report.curve->auc;
  }
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

std::vector<SampleError> read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line) || line.rfind("id,yaw,error", 0) != 0) {
    throw ParseError("expected header 'id,yaw,error'", line_no);
  }
  std::vector<SampleError> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    SampleError s;
    std::string yaw, err;
    if (!std::getline(ls, s.id, ',') || !std::getline(ls, yaw, ',') || !std::getline(ls, err)) {
      throw ParseError("expected 3 fields", line_no);
    }
    try {
      s.yaw_degrees = std::stod(yaw);
      s.error = std::stod(err);
    } catch (const std::exception&) {
      throw ParseError("invalid number", line_no);
    }
    rows.push_back(s);
  }
  return rows;
}

void write_ced_csv(const CedCurve& curve, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "threshold,fraction\n";
  for (std::size_t i = 0; i < curve.thresholds.size(); ++i) {
    out << num(curve.thresholds[i]) << ',' << num(curve.fractions[i]) << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::string ced_svg(const std::vector<CedSeries>& series, const std::string& x_label) {
  if (series.empty()) throw InvalidArgument("nothing to plot");
  constexpr double kW = 640, kH = 480, kLeft = 70, kRight = 20, kTop = 20, kBottom = 60;
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;
  double cutoff = 0.0;
  for (const auto& s : series) cutoff = std::max(cutoff, s.curve.cutoff);
  auto sx = [&](double x) { return kLeft + pw * x / cutoff; };
  auto sy = [&](double y) { return kTop + ph * (1.0 - y); };
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

  std::ostringstream o;
  o << std::fixed << std::setprecision(2);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW
    << ' ' << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = cutoff * i / 5.0;
    const double fy = i / 5.0;
    o << "<line x1=\"" << sx(fx) << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(fx) << "\" y2=\"" << sy(1)
      << "\" stroke=\"#dddddd\"/>\n";
    o << "<line x1=\"" << sx(0) << "\" y1=\"" << sy(fy) << "\" x2=\"" << sx(cutoff) << "\" y2=\"" << sy(fy)
      << "\" stroke=\"#dddddd\"/>\n";
    o << "<text x=\"" << sx(fx) << "\" y=\"" << sy(0) + 18 << "\" text-anchor=\"middle\">" << fx << "</text>\n";
    o << "<text x=\"" << sx(0) - 8 << "\" y=\"" << sy(fy) + 4 << "\" text-anchor=\"end\">" << fy << "</text>\n";
  }
  o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 15 << "\" text-anchor=\"middle\">" << xml_escape(x_label)
    << "</text>\n";
  o << "<text x=\"18\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << kTop + ph / 2 << ")\">Fraction of samples</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& c = series[k].curve;
    const char* color = kColors[k % std::size(kColors)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < c.thresholds.size(); ++i) {
      if (i) o << ' ';
      o << sx(c.thresholds[i]) << ',' << sy(c.fractions[i]);
    }
    o << "\"/>\n";
    const double ly = kTop + ph - 20.0 * (static_cast<double>(series.size() - k));
    o << "<line x1=\"" << kLeft + pw - 190 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + pw - 165 << "\" y2=\"" << ly
      << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << kLeft + pw - 160 << "\" y=\"" << ly + 4 << "\">" << xml_escape(series[k].label) << " ("
      << std::setprecision(3) << c.mean << std::setprecision(2) << ")</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace uvface
