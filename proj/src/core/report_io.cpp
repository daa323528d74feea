#include "report_io.hpp"

#include "common.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace insurval {

std::vector<double> empirical_quantiles(const Eigen::VectorXd& v,
                                        const std::vector<double>& levels) {
    if (v.size() == 0) throw validation_error("empirical_quantiles: empty vector");
    std::vector<double> sorted(v.data(), v.data() + v.size());
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out;
    out.reserve(levels.size());
    const auto m = static_cast<double>(sorted.size());
    for (double a : levels) {
        if (!(a > 0.0 && a < 1.0))
            throw validation_error("empirical_quantiles: level outside (0,1)");
        const auto idx = static_cast<std::size_t>(std::max(1.0, std::ceil(a * m - 1e-12))) - 1;
        out.push_back(sorted[std::min(idx, sorted.size() - 1)]);
    }
    return out;
}

Histogram make_histogram(const Eigen::VectorXd& v, int bins) {
    if (v.size() == 0 || bins < 1) throw validation_error("make_histogram: bad inputs");
    Histogram h;
    double lo = v.minCoeff(), hi = v.maxCoeff();
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / bins;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = lo + b * width;
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        auto b = static_cast<long>((v(i) - lo) / width);
        b = std::min<long>(std::max<long>(b, 0), bins - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    return h;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw validation_error("cannot write " + path);
    out << content;
    if (!out) throw validation_error("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw validation_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw validation_error("output directory is not writable: " + dir);
}

std::string format_double(double v, int precision) {
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

} // namespace insurval
