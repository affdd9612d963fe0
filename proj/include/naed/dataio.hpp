#pragma once

#include <string>

#include "naed/dictionary.hpp"
#include "naed/model.hpp"
#include "naed/signal.hpp"

namespace naed {

// Dataset files are newline-delimited JSON (UTF-8, LF): a header line
// {"n": int, "classes": int, "meta": {...}} followed by one record per
// series {"id": str, "times": [...], "values": [[...]], "label": int}.
// Values round-trip at full double precision.
void writeDataset(const Dataset& data, const std::string& path);
Dataset readDataset(const std::string& path);

// Checkpoints are a single JSON document carrying the dictionary spec, the
// problem dimensions and the four parameter blocks in row-major order.
struct Checkpoint {
    DictionarySpec spec;
    Parameters params;
    std::map<std::string, std::string> meta;

    Checkpoint(DictionarySpec s, Parameters p) : spec(std::move(s)), params(std::move(p)) {}
};

void writeCheckpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint readCheckpoint(const std::string& path);

// UCR archive ingestion: one series per row, class label first, then the
// (fixed-length) sampled values; tab- or comma-delimited. Labels are
// remapped to contiguous 0-based indices preserving their sorted original
// order; times become 0, 1, ..., M.
// delimiter '\0' auto-detects (tab first, then comma).
Dataset readUCR(const std::string& path, char delimiter = '\0');

}  // namespace naed
