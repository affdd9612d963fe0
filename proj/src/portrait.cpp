#include "naed/portrait.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "naed/integrator.hpp"

namespace naed {

void PortraitSpec::validate() const {
    if (!(h1Max > h1Min) || !(h2Max > h2Min)) {
        throw ConfigError("portrait: window must be non-degenerate");
    }
    if (gridResolution < 2) throw ConfigError("portrait: gridResolution must be >= 2");
    if (substeps < 1) throw ConfigError("portrait: substeps must be >= 1");
}

PortraitData computePortrait(const Parameters& params, const DictionarySpec& spec,
                             const Dataset& data, const PortraitSpec& portrait) {
    portrait.validate();
    if (spec.hiddenDim() != 2) {
        throw UnsupportedHiddenDim("portraits are drawn for hiddenDim == 2 only (got " +
                                   std::to_string(spec.hiddenDim()) + ")");
    }

    PortraitData out;
    const int res = portrait.gridResolution;
    DictionaryEvaluator dict(spec);
    Eigen::VectorXd h(2), xi(spec.dimension());

    out.arrows.reserve(static_cast<std::size_t>(res) * res);
    out.regionClass.reserve(static_cast<std::size_t>(res) * res);
    for (int r = 0; r < res; ++r) {
        for (int c = 0; c < res; ++c) {
            h[0] = portrait.h1Min + (portrait.h1Max - portrait.h1Min) * c / (res - 1);
            h[1] = portrait.h2Min + (portrait.h2Max - portrait.h2Min) * r / (res - 1);
            dict.values(h, xi);
            const Eigen::VectorXd v = params.beta * xi;
            out.arrows.push_back({h[0], h[1], v[0], v[1]});
            out.regionClass.push_back(argmax(params.A * h + params.b));
        }
    }

    std::set<std::string> wanted(portrait.sampleIds.begin(), portrait.sampleIds.end());
    for (const auto& ts : data.series) {
        if (!wanted.count(ts.id)) continue;
        wanted.erase(ts.id);
        const Trajectory traj = solveForward(params, spec, ts, portrait.substeps);
        PortraitData::TrajectoryTrace trace;
        trace.sampleId = ts.id;
        trace.labelClass = ts.labeled() ? ts.labelIndex() : -1;
        trace.predictedClass =
            argmax(softmax(params.A * traj.finalState() + params.b));
        const int nodes = traj.grid.nodes();
        trace.t.reserve(nodes);
        trace.h1.reserve(nodes);
        trace.h2.reserve(nodes);
        for (int j = 0; j < nodes; ++j) {
            trace.t.push_back(traj.grid.times[j]);
            trace.h1.push_back(traj.states(0, j));
            trace.h2.push_back(traj.states(1, j));
        }
        out.trajectories.push_back(std::move(trace));
    }
    if (!wanted.empty()) {
        throw ConfigError("portrait: sample id '" + *wanted.begin() + "' not in dataset");
    }

    // readout overlay and linear-part eigenvalues are decorations; the
    // pointwise regions above are the decision rule
    if (params.numClasses() == 2) {
        Eigen::Matrix2d A2 = params.A;
        const double det = A2.determinant();
        if (std::abs(det) > 1e-12 * std::max(1.0, A2.cwiseAbs().maxCoeff())) {
            const Eigen::Vector2d h0 = -A2.inverse() * params.b;
            out.hasAnchor = true;
            out.anchorH1 = h0[0];
            out.anchorH2 = h0[1];
            out.rowA1H1 = A2(0, 0);
            out.rowA1H2 = A2(0, 1);
            out.rowA2H1 = A2(1, 0);
            out.rowA2H2 = A2(1, 1);
        }
    }

    if (spec.kind() == DictionaryKind::Polynomial && spec.maxDegree() >= 1) {
        // columns 1..2 of beta multiply the linear monomials h1, h2
        Eigen::Matrix2d linear = params.beta.block(0, 1, 2, 2);
        const Eigen::EigenSolver<Eigen::Matrix2d> eig(linear);
        for (int i = 0; i < 2; ++i) {
            out.linearEigenvalues.emplace_back(eig.eigenvalues()[i].real(),
                                               eig.eigenvalues()[i].imag());
        }
    }
    return out;
}

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(12);
    ss << v;
    return ss.str();
}

}  // namespace

std::string portraitToCsv(const PortraitData& data, const PortraitSpec& portrait) {
    std::ostringstream out;
    out << "kind,h1,h2,v1,v2,class,sample_id,t\n";
    const int res = portrait.gridResolution;
    for (int i = 0; i < static_cast<int>(data.arrows.size()); ++i) {
        const auto& a = data.arrows[i];
        out << "arrow," << fmt(a.h1) << ',' << fmt(a.h2) << ',' << fmt(a.v1) << ',' << fmt(a.v2)
            << ",,,\n";
    }
    for (int i = 0; i < res * res; ++i) {
        const auto& a = data.arrows[i];
        out << "region," << fmt(a.h1) << ',' << fmt(a.h2) << ",,," << data.regionClass[i]
            << ",,\n";
    }
    for (const auto& trace : data.trajectories) {
        for (std::size_t j = 0; j < trace.t.size(); ++j) {
            out << "trajectory," << fmt(trace.h1[j]) << ',' << fmt(trace.h2[j]) << ",,,"
                << trace.predictedClass << ',' << trace.sampleId << ',' << fmt(trace.t[j])
                << "\n";
        }
    }
    if (data.hasAnchor) {
        out << "anchor," << fmt(data.anchorH1) << ',' << fmt(data.anchorH2) << ",,,,,\n";
        out << "readout_row," << fmt(data.anchorH1) << ',' << fmt(data.anchorH2) << ','
            << fmt(data.rowA1H1) << ',' << fmt(data.rowA1H2) << ",0,,\n";
        out << "readout_row," << fmt(data.anchorH1) << ',' << fmt(data.anchorH2) << ','
            << fmt(data.rowA2H1) << ',' << fmt(data.rowA2H2) << ",1,,\n";
    }
    return out.str();
}

namespace {

// class palette: light region fills, saturated trajectory strokes
const char* regionFill(int cls) {
    static const char* fills[] = {"#fbd5d5", "#d6e4fb", "#d9f2d9", "#f9ecd1",
                                  "#ecd9f2", "#d1f0ef"};
    return fills[cls % 6];
}

const char* strokeColor(int cls) {
    static const char* strokes[] = {"#c23b3b", "#2f5fb3", "#2e8b57", "#c28a1f",
                                    "#7a3bb3", "#1f8a86"};
    return strokes[cls % 6];
}

}  // namespace

std::string portraitToSvg(const PortraitData& data, const PortraitSpec& portrait) {
    const double w = 640.0, hpx = 640.0, margin = 40.0;
    const double spanX = portrait.h1Max - portrait.h1Min;
    const double spanY = portrait.h2Max - portrait.h2Min;
    auto px = [&](double h1) { return margin + (h1 - portrait.h1Min) / spanX * (w - 2 * margin); };
    auto py = [&](double h2) {
        return hpx - margin - (h2 - portrait.h2Min) / spanY * (hpx - 2 * margin);
    };

    const int res = portrait.gridResolution;
    const double cellW = (w - 2 * margin) / (res - 1);
    const double cellH = (hpx - 2 * margin) / (res - 1);

    double maxMag = 0.0;
    for (const auto& a : data.arrows) maxMag = std::max(maxMag, std::hypot(a.v1, a.v2));
    const double cell = std::min(spanX, spanY) / (res - 1);
    const double arrowScale = maxMag > 0.0 ? 0.8 * cell / maxMag : 0.0;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << hpx
        << "\" viewBox=\"0 0 " << w << ' ' << hpx << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // decision regions as grid cells
    for (int r = 0; r < res; ++r) {
        for (int c = 0; c < res; ++c) {
            const auto& a = data.arrows[r * res + c];
            out << "<rect x=\"" << px(a.h1) - cellW / 2 << "\" y=\"" << py(a.h2) - cellH / 2
                << "\" width=\"" << cellW << "\" height=\"" << cellH << "\" fill=\""
                << regionFill(data.regionClass[r * res + c]) << "\"/>\n";
        }
    }

    // vector field arrows, normalized to 80% of a cell
    for (const auto& a : data.arrows) {
        const double x0 = px(a.h1), y0 = py(a.h2);
        const double dx = a.v1 * arrowScale, dy = a.v2 * arrowScale;
        const double x1 = px(a.h1 + dx), y1 = py(a.h2 + dy);
        out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y1
            << "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
        // arrow head: small dot at the tip keeps the file compact
        out << "<circle cx=\"" << x1 << "\" cy=\"" << y1 << "\" r=\"1.6\" fill=\"#333\"/>\n";
    }

    for (const auto& trace : data.trajectories) {
        out << "<polyline fill=\"none\" stroke=\"" << strokeColor(std::max(0, trace.labelClass))
            << "\" stroke-width=\"2\" points=\"";
        for (std::size_t j = 0; j < trace.t.size(); ++j) {
            out << px(trace.h1[j]) << ',' << py(trace.h2[j]) << ' ';
        }
        out << "\"/>\n";
        if (!trace.t.empty()) {
            const double xe = px(trace.h1.back()), ye = py(trace.h2.back());
            out << "<rect x=\"" << xe - 4 << "\" y=\"" << ye - 4
                << "\" width=\"8\" height=\"8\" fill=\""
                << strokeColor(std::max(0, trace.labelClass)) << "\"/>\n";
        }
    }

    if (data.hasAnchor) {
        const double ax = px(data.anchorH1), ay = py(data.anchorH2);
        out << "<circle cx=\"" << ax << "\" cy=\"" << ay << "\" r=\"4\" fill=\"#1a7f1a\"/>\n";
        for (const auto& [r1, r2] : {std::pair{data.rowA1H1, data.rowA1H2},
                                     std::pair{data.rowA2H1, data.rowA2H2}}) {
            const double norm = std::hypot(r1, r2);
            if (norm == 0.0) continue;
            const double len = 0.2 * std::min(spanX, spanY);
            out << "<line x1=\"" << ax << "\" y1=\"" << ay << "\" x2=\""
                << px(data.anchorH1 + r1 / norm * len) << "\" y2=\""
                << py(data.anchorH2 + r2 / norm * len)
                << "\" stroke=\"#1a7f1a\" stroke-width=\"2\"/>\n";
        }
    }

    // magnitude legend
    out << "<text x=\"" << margin << "\" y=\"" << margin - 14
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">max |field| = "
        << maxMag << "</text>\n";
    if (!data.linearEigenvalues.empty()) {
        out << "<text x=\"" << margin << "\" y=\"" << margin
            << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">linear part "
               "eigenvalues:";
        for (const auto& [re, im] : data.linearEigenvalues) {
            out << ' ' << re << (im >= 0 ? "+" : "-") << std::abs(im) << "i";
        }
        out << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string renderPortrait(const Parameters& params, const DictionarySpec& spec,
                           const Dataset& data, const PortraitSpec& portrait) {
    const PortraitData computed = computePortrait(params, spec, data, portrait);
    return portrait.format == PortraitFormat::CSV ? portraitToCsv(computed, portrait)
                                                  : portraitToSvg(computed, portrait);
}

}  // namespace naed
