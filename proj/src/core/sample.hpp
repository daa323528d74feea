#ifndef INSURVAL_SAMPLE_HPP
#define INSURVAL_SAMPLE_HPP

#include <vector>

namespace insurval {

// Empirical distribution: finite outcomes with optional probability
// weights. An empty weight vector means uniform.
class Sample {
public:
    explicit Sample(std::vector<double> values);
    Sample(std::vector<double> values, std::vector<double> weights);

    const std::vector<double>& values() const { return values_; }
    bool uniform() const { return weights_.empty(); }
    // weight of observation i (1/M when uniform)
    double weight(std::size_t i) const;
    std::size_t size() const { return values_.size(); }

    double mean() const;
    double stddev() const;

private:
    std::vector<double> values_;
    std::vector<double> weights_; // empty => uniform
};

} // namespace insurval

#endif // INSURVAL_SAMPLE_HPP
