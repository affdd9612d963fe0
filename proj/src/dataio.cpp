#include "naed/dataio.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace naed {

using nlohmann::json;

namespace {

json specToJson(const DictionarySpec& spec) {
    json j;
    j["m"] = spec.hiddenDim();
    if (spec.kind() == DictionaryKind::Polynomial) {
        j["kind"] = "polynomial";
        j["k"] = spec.maxDegree();
    } else {
        j["kind"] = "fourier";
        j["K"] = spec.maxMultiplier();
        j["L"] = spec.period();
    }
    return j;
}

DictionarySpec specFromJson(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.contains("m")) {
        throw SchemaError("checkpoint: malformed dictionary spec");
    }
    const std::string kind = j.at("kind").get<std::string>();
    const int m = j.at("m").get<int>();
    if (kind == "polynomial") return DictionarySpec::polynomial(m, j.at("k").get<int>());
    if (kind == "fourier") {
        return DictionarySpec::fourier(m, j.at("K").get<int>(), j.at("L").get<double>());
    }
    throw SchemaError("checkpoint: unknown dictionary kind '" + kind + "'");
}

json matrixToJson(const Eigen::MatrixXd& mat) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < mat.cols(); ++j) row.push_back(mat(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrixFromJson(const json& j, Eigen::Index rows, Eigen::Index cols,
                               const std::string& name) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
        throw SchemaError("checkpoint: block '" + name + "' has wrong row count");
    }
    Eigen::MatrixXd mat(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& row = j.at(i);
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw SchemaError("checkpoint: block '" + name + "' has wrong column count");
        }
        for (Eigen::Index c = 0; c < cols; ++c) mat(i, c) = row.at(c).get<double>();
    }
    return mat;
}

}  // namespace

void writeDataset(const Dataset& data, const std::string& path) {
    data.validate();
    std::ofstream out(path, std::ios::binary);  // binary keeps LF on every platform
    if (!out) throw IoError("cannot open '" + path + "' for writing");

    json header;
    header["n"] = data.inputDim;
    header["classes"] = data.numClasses;
    header["meta"] = json::object();
    for (const auto& [k, v] : data.metadata) header["meta"][k] = v;
    out << header.dump() << '\n';

    for (const auto& ts : data.series) {
        json rec;
        rec["id"] = ts.id;
        rec["times"] = ts.times;
        json values = json::array();
        for (Eigen::Index c = 0; c < ts.values.cols(); ++c) {
            json point = json::array();
            for (Eigen::Index r = 0; r < ts.values.rows(); ++r) point.push_back(ts.values(r, c));
            values.push_back(std::move(point));
        }
        rec["values"] = std::move(values);
        if (ts.labeled()) rec["label"] = ts.labelIndex();
        out << rec.dump() << '\n';
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

Dataset readDataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw SchemaError("dataset '" + path + "': missing header");
    json header = json::parse(line, nullptr, false);
    if (header.is_discarded() || !header.contains("n") || !header.contains("classes")) {
        throw SchemaError("dataset '" + path + "': malformed header");
    }

    Dataset data;
    data.inputDim = header.at("n").get<int>();
    data.numClasses = header.at("classes").get<int>();
    if (header.contains("meta")) {
        for (const auto& [k, v] : header.at("meta").items()) {
            data.metadata[k] = v.get<std::string>();
        }
    }

    int lineNo = 1;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.empty()) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded()) {
            throw ParseError("dataset '" + path + "': bad JSON on line " + std::to_string(lineNo),
                             lineNo);
        }
        TimeSeries ts;
        try {
            ts.id = rec.at("id").get<std::string>();
            ts.times = rec.at("times").get<std::vector<double>>();
        } catch (const json::exception& e) {
            throw SchemaError("dataset '" + path + "' line " + std::to_string(lineNo) + ": " +
                              e.what());
        }
        const auto& values = rec.at("values");
        if (values.size() != ts.times.size()) {
            throw SchemaError("dataset '" + path + "': series '" + ts.id +
                              "' has values/times length mismatch");
        }
        ts.values.resize(data.inputDim, static_cast<Eigen::Index>(ts.times.size()));
        for (std::size_t c = 0; c < values.size(); ++c) {
            const auto& point = values.at(c);
            if (static_cast<int>(point.size()) != data.inputDim) {
                throw SchemaError("dataset '" + path + "': series '" + ts.id +
                                  "' has a value point of wrong dimension");
            }
            for (int r = 0; r < data.inputDim; ++r) {
                ts.values(r, static_cast<Eigen::Index>(c)) = point.at(r).get<double>();
            }
        }
        if (rec.contains("label")) {
            const int label = rec.at("label").get<int>();
            if (label < 0 || label >= data.numClasses) {
                throw SchemaError("dataset '" + path + "': series '" + ts.id +
                                  "' label out of range");
            }
            ts.label = oneHot(label, data.numClasses);
        }
        data.series.push_back(std::move(ts));
    }
    data.validate();
    return data;
}

void writeCheckpoint(const Checkpoint& ckpt, const std::string& path) {
    if (!ckpt.params.allFinite()) throw SchemaError("checkpoint: non-finite parameters");
    json j;
    j["dictionary"] = specToJson(ckpt.spec);
    j["n"] = ckpt.params.inputDim();
    j["classes"] = ckpt.params.numClasses();
    j["beta"] = matrixToJson(ckpt.params.beta);
    j["B"] = matrixToJson(ckpt.params.B);
    j["A"] = matrixToJson(ckpt.params.A);
    json b = json::array();
    for (Eigen::Index i = 0; i < ckpt.params.b.size(); ++i) b.push_back(ckpt.params.b[i]);
    j["b"] = std::move(b);
    j["meta"] = json::object();
    for (const auto& [k, v] : ckpt.meta) j["meta"][k] = v;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for '" + path + "'");
}

Checkpoint readCheckpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw SchemaError("checkpoint '" + path + "': not valid JSON");

    try {
        const DictionarySpec spec = specFromJson(j.at("dictionary"));
        const int n = j.at("n").get<int>();
        const int classes = j.at("classes").get<int>();

        Parameters p;
        p.beta = matrixFromJson(j.at("beta"), spec.hiddenDim(), spec.dimension(), "beta");
        p.B = matrixFromJson(j.at("B"), spec.hiddenDim(), n, "B");
        p.A = matrixFromJson(j.at("A"), classes, spec.hiddenDim(), "A");
        const auto& b = j.at("b");
        if (static_cast<int>(b.size()) != classes) {
            throw SchemaError("checkpoint: block 'b' has wrong length");
        }
        p.b.resize(classes);
        for (int i = 0; i < classes; ++i) p.b[i] = b.at(i).get<double>();
        if (!p.allFinite()) throw SchemaError("checkpoint '" + path + "': non-finite parameters");

        Checkpoint ckpt(spec, std::move(p));
        if (j.contains("meta")) {
            for (const auto& [k, v] : j.at("meta").items()) ckpt.meta[k] = v.get<std::string>();
        }
        return ckpt;
    } catch (const json::exception& e) {
        throw SchemaError("checkpoint '" + path + "': " + std::string(e.what()));
    }
}

Dataset readUCR(const std::string& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");

    std::vector<double> rawLabels;
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineNo = 0;
    std::size_t width = 0;

    while (std::getline(in, line)) {
        ++lineNo;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        char delim = delimiter;
        if (delim == '\0') delim = line.find('\t') != std::string::npos ? '\t' : ',';

        std::vector<double> fields;
        std::stringstream ss(line);
        std::string token;
        int col = 0;
        while (std::getline(ss, token, delim)) {
            ++col;
            if (token.empty()) continue;
            try {
                std::size_t used = 0;
                const double v = std::stod(token, &used);
                if (used != token.size()) throw std::invalid_argument(token);
                fields.push_back(v);
            } catch (const std::exception&) {
                throw ParseError("UCR '" + path + "': bad number at row " +
                                     std::to_string(lineNo) + ", column " + std::to_string(col),
                                 lineNo, col);
            }
        }
        if (fields.size() < 2) {
            throw ParseError("UCR '" + path + "': row " + std::to_string(lineNo) +
                                 " needs a label and at least one value",
                             lineNo, 1);
        }
        if (width == 0) {
            width = fields.size();
        } else if (fields.size() != width) {
            throw RaggedRows("UCR '" + path + "': row " + std::to_string(lineNo) + " has " +
                                 std::to_string(fields.size() - 1) + " values, expected " +
                                 std::to_string(width - 1),
                             lineNo, 1);
        }
        rawLabels.push_back(fields[0]);
        rows.emplace_back(fields.begin() + 1, fields.end());
    }
    if (rows.empty()) throw SchemaError("UCR '" + path + "': no data rows");

    // contiguous class ids in sorted original order
    std::vector<double> sorted = rawLabels;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::map<double, int> remap;
    for (std::size_t i = 0; i < sorted.size(); ++i) remap[sorted[i]] = static_cast<int>(i);

    Dataset data;
    data.inputDim = 1;
    data.numClasses = static_cast<int>(sorted.size());
    data.metadata["source"] = path;
    for (const auto& [orig, idx] : remap) {
        std::ostringstream key;
        key << "label_" << idx;
        std::ostringstream val;
        val << orig;
        data.metadata[key.str()] = val.str();
    }

    const std::size_t length = width - 1;
    std::vector<double> times(length);
    for (std::size_t j = 0; j < length; ++j) times[j] = static_cast<double>(j);

    for (std::size_t i = 0; i < rows.size(); ++i) {
        TimeSeries ts;
        ts.id = "ucr-" + std::to_string(i);
        ts.times = times;
        ts.values.resize(1, static_cast<Eigen::Index>(length));
        for (std::size_t j = 0; j < length; ++j) ts.values(0, static_cast<Eigen::Index>(j)) = rows[i][j];
        ts.label = oneHot(remap.at(rawLabels[i]), data.numClasses);
        data.series.push_back(std::move(ts));
    }
    data.validate();
    return data;
}

}  // namespace naed
