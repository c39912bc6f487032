#include "potts/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace potts {

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
  f << "\n";
  f.precision(12);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << row[i];
    f << "\n";
  }
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  auto trim = [](std::string s) {
    auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
  };
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) out[key] = val;
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  return parse_config_text(read_text_file(path));
}

std::string svg_plot(const std::vector<PlotSeries>& series, bool loglog) {
  const double W = 560, H = 420, L = 60, B = 40;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  auto tx = [&](double v) { return loglog ? std::log10(v) : v; };
  for (const auto& s : series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xmin = std::min(xmin, tx(s.x[i]));
      xmax = std::max(xmax, tx(s.x[i]));
      ymin = std::min(ymin, tx(s.y[i]));
      ymax = std::max(ymax, tx(s.y[i]));
    }
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;
  auto X = [&](double v) { return L + (tx(v) - xmin) / (xmax - xmin) * (W - L - 20); };
  auto Y = [&](double v) { return H - B - (tx(v) - ymin) / (ymax - ymin) * (H - B - 20); };
  const char* colors[] = {"steelblue", "crimson", "seagreen", "darkorange", "purple"};
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  svg << "<rect width='100%' height='100%' fill='white'/>\n";
  svg << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - 20 << "' y2='" << H - B
      << "' stroke='black'/>\n";
  svg << "<line x1='" << L << "' y1='" << H - B << "' x2='" << L << "' y2='20' stroke='black'/>\n";
  int ci = 0;
  for (const auto& s : series) {
    const char* col = colors[ci++ % 5];
    svg << "<polyline fill='none' stroke='" << col << "' points='";
    for (std::size_t i = 0; i < s.x.size(); ++i) svg << X(s.x[i]) << "," << Y(s.y[i]) << " ";
    svg << "'/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i)
      svg << "<circle cx='" << X(s.x[i]) << "' cy='" << Y(s.y[i]) << "' r='3' fill='" << col
          << "'/>\n";
    svg << "<text x='" << W - 150 << "' y='" << 30 + 16 * ci << "' fill='" << col << "'>"
        << s.label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

int env_worker_count() {
  if (const char* env = std::getenv("POTTS_WORKERS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 4;
}

}  // namespace potts
