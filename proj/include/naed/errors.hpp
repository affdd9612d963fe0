#pragma once

#include <stdexcept>
#include <string>

namespace naed {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A dictionary was asked to evaluate a NaN/inf hidden state. Usually means
// the forward solve escaped upstream and nobody checked.
struct NonFiniteInput : Error {
    using Error::Error;
};

// The hidden state exceeded the guard threshold during a solve.
// Carries the time at which the escape was detected and, when known,
// the offending sample.
struct BlowUp : Error {
    double time;
    std::string sampleId;
    explicit BlowUp(double t, std::string id = "")
        : Error(id.empty() ? "solution blew up at t=" + std::to_string(t)
                           : "sample '" + id + "' blew up at t=" + std::to_string(t)),
          time(t), sampleId(std::move(id)) {}
};

// Raised by training when a batch member blows up; identifies the epoch and
// sample so the caller can re-initialize or lower the learning rate.
struct BlowUpDuringTraining : Error {
    int epoch;
    std::string sampleId;
    BlowUpDuringTraining(int ep, std::string id, double t)
        : Error("blow-up during training at epoch " + std::to_string(ep) +
                ", sample '" + id + "', t=" + std::to_string(t)),
          epoch(ep), sampleId(std::move(id)) {}
};

// An accumulated gradient entry came out NaN/inf.
struct NonFiniteGradient : Error {
    using Error::Error;
};

struct GenerationFailure : Error {
    using Error::Error;
};

// File / schema problems in dataio.
struct ParseError : Error {
    int row = -1;
    int column = -1;
    ParseError(const std::string& what, int r = -1, int c = -1)
        : Error(what), row(r), column(c) {}
};

struct RaggedRows : ParseError {
    using ParseError::ParseError;
};

struct SchemaError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// Portrait rendering is defined for two-dimensional hidden states only.
struct UnsupportedHiddenDim : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

}  // namespace naed
