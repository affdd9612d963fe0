#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <vector>

#include "naed/errors.hpp"

namespace naed {

// One sampled input signal with optional one-hot label.
//
// `values` is n x (M+1), one column per sample time; signals of different
// length coexist in a Dataset, each owning its own grid.
struct TimeSeries {
    std::string id;
    std::vector<double> times;  // strictly increasing, times[0] == 0
    Eigen::MatrixXd values;     // inputDim x times.size()
    Eigen::VectorXd label;      // one-hot, size 0 when unlabeled

    double finalTime() const { return times.back(); }
    int inputDim() const { return static_cast<int>(values.rows()); }
    bool labeled() const { return label.size() > 0; }
    int labelIndex() const;

    void validate() const;
};

struct Dataset {
    std::vector<TimeSeries> series;
    int inputDim = 0;
    int numClasses = 0;
    std::map<std::string, std::string> metadata;

    void validate() const;
    std::vector<int> classCounts() const;
};

// Piecewise-linear evaluation of the signal at time t; clamps to the
// endpoint values outside [times.front(), times.back()].
Eigen::VectorXd interpolate(const TimeSeries& ts, double t);

// Allocation-free form for solver loops.
void interpolateInto(const TimeSeries& ts, double t, Eigen::VectorXd& out);

Eigen::VectorXd oneHot(int index, int numClasses);

}  // namespace naed
