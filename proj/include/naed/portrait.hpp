#pragma once

#include <optional>
#include <string>
#include <vector>

#include "naed/dictionary.hpp"
#include "naed/model.hpp"
#include "naed/signal.hpp"

namespace naed {

enum class PortraitFormat { SVG, CSV };

struct PortraitSpec {
    double h1Min = -3.0, h1Max = 3.0;
    double h2Min = -3.0, h2Max = 3.0;
    int gridResolution = 15;  // arrows (and region shading) per axis
    std::vector<std::string> sampleIds;
    int substeps = 1;
    PortraitFormat format = PortraitFormat::SVG;

    void validate() const;
};

// Everything drawn in a portrait, exposed so the CSV and SVG writers (and
// the tests) work from one computed dataset.
struct PortraitData {
    struct Arrow {
        double h1, h2;  // base point
        double v1, v2;  // autonomous field beta*Xi(h)
    };
    struct TrajectoryTrace {
        std::string sampleId;
        int labelClass = -1;     // -1 when unlabeled
        int predictedClass = 0;
        std::vector<double> t, h1, h2;
    };
    std::vector<Arrow> arrows;
    std::vector<int> regionClass;  // row-major over the same grid as arrows
    std::vector<TrajectoryTrace> trajectories;

    // anchor construction h0 = -A^{-1} b with the rows of A, drawn only for
    // two invertible readout rows
    bool hasAnchor = false;
    double anchorH1 = 0.0, anchorH2 = 0.0;
    double rowA1H1 = 0.0, rowA1H2 = 0.0;
    double rowA2H1 = 0.0, rowA2H2 = 0.0;

    // eigenvalues of the linear part of the learned field, when the
    // dictionary contains the linear monomials
    std::vector<std::pair<double, double>> linearEigenvalues;  // (re, im)
};

// Computes arrows, pointwise argmax decision regions, selected sample
// trajectories and the readout overlay. Requires hiddenDim == 2.
PortraitData computePortrait(const Parameters& params, const DictionarySpec& spec,
                             const Dataset& data, const PortraitSpec& portrait);

// Serialize as a self-contained SVG or as CSV rows
// kind,h1,h2,v1,v2,class,sample_id,t (unused columns empty).
std::string renderPortrait(const Parameters& params, const DictionarySpec& spec,
                           const Dataset& data, const PortraitSpec& portrait);

std::string portraitToCsv(const PortraitData& data, const PortraitSpec& portrait);
std::string portraitToSvg(const PortraitData& data, const PortraitSpec& portrait);

}  // namespace naed
