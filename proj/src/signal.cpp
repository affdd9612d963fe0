#include "naed/signal.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace naed {

int TimeSeries::labelIndex() const {
    int best = 0;
    for (int j = 1; j < label.size(); ++j) {
        if (label[j] > label[best]) best = j;
    }
    return best;
}

void TimeSeries::validate() const {
    if (times.empty()) throw SchemaError("time series '" + id + "': empty time grid");
    if (times.front() != 0.0) throw SchemaError("time series '" + id + "': times must start at 0");
    for (std::size_t j = 1; j < times.size(); ++j) {
        if (!(times[j] > times[j - 1])) {
            throw SchemaError("time series '" + id + "': times must be strictly increasing");
        }
    }
    if (values.cols() != static_cast<Eigen::Index>(times.size())) {
        throw SchemaError("time series '" + id + "': values/times length mismatch");
    }
    if (!values.allFinite()) throw SchemaError("time series '" + id + "': non-finite values");
    if (label.size() > 0) {
        int ones = 0;
        for (int j = 0; j < label.size(); ++j) {
            if (label[j] == 1.0) {
                ++ones;
            } else if (label[j] != 0.0) {
                throw SchemaError("time series '" + id + "': label is not one-hot");
            }
        }
        if (ones != 1) throw SchemaError("time series '" + id + "': label is not one-hot");
    }
}

void Dataset::validate() const {
    std::set<std::string> ids;
    for (const auto& ts : series) {
        ts.validate();
        if (ts.inputDim() != inputDim) {
            throw SchemaError("dataset: series '" + ts.id + "' has input dim " +
                              std::to_string(ts.inputDim()) + ", expected " +
                              std::to_string(inputDim));
        }
        if (ts.labeled() && ts.label.size() != numClasses) {
            throw SchemaError("dataset: series '" + ts.id + "' label size mismatch");
        }
        if (!ids.insert(ts.id).second) {
            throw SchemaError("dataset: duplicate series id '" + ts.id + "'");
        }
    }
}

std::vector<int> Dataset::classCounts() const {
    std::vector<int> counts(numClasses, 0);
    for (const auto& ts : series) {
        if (ts.labeled()) counts[ts.labelIndex()]++;
    }
    return counts;
}

void interpolateInto(const TimeSeries& ts, double t, Eigen::VectorXd& out) {
    const auto& times = ts.times;
    if (t <= times.front()) {
        out = ts.values.col(0);
        return;
    }
    if (t >= times.back()) {
        out = ts.values.col(ts.values.cols() - 1);
        return;
    }
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto j = static_cast<Eigen::Index>(it - times.begin()) - 1;
    const double t0 = times[j], t1 = times[j + 1];
    const double w = (t - t0) / (t1 - t0);
    out = (1.0 - w) * ts.values.col(j) + w * ts.values.col(j + 1);
}

Eigen::VectorXd interpolate(const TimeSeries& ts, double t) {
    if (!std::isfinite(t)) throw NonFiniteInput("interpolate: non-finite time");
    Eigen::VectorXd out(ts.inputDim());
    interpolateInto(ts, t, out);
    return out;
}

Eigen::VectorXd oneHot(int index, int numClasses) {
    Eigen::VectorXd y = Eigen::VectorXd::Zero(numClasses);
    y[index] = 1.0;
    return y;
}

}  // namespace naed
