#ifndef POTTS_IO_HPP
#define POTTS_IO_HPP

#include <map>
#include <string>
#include <vector>

namespace potts {

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// one row per (n, estimate, err) plus free extra columns
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// key = value lines; '#' comments; later keys win
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

// minimal plot: one polyline per series over scatter points, log axes
struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};
std::string svg_plot(const std::vector<PlotSeries>& series, bool loglog);

int env_worker_count();  // POTTS_WORKERS, or hardware concurrency

}  // namespace potts

#endif
