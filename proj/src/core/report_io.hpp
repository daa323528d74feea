#ifndef INSURVAL_REPORT_IO_HPP
#define INSURVAL_REPORT_IO_HPP

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace insurval {

// order-statistic quantiles (same convention as risk_measures::var),
// one sort for all levels
std::vector<double> empirical_quantiles(const Eigen::VectorXd& v,
                                        const std::vector<double>& levels);

struct Histogram {
    std::vector<double> edges; // bins+1 edges
    std::vector<long> counts;
};
Histogram make_histogram(const Eigen::VectorXd& v, int bins);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
std::string join_path(const std::string& dir, const std::string& name);
void ensure_directory(const std::string& dir);

std::string format_double(double v, int precision = 12);

} // namespace insurval

#endif // INSURVAL_REPORT_IO_HPP
