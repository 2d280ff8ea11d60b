#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lyaplab/cocycle.hpp"

namespace lyaplab::io {

// Shortest round-trip decimal form; identical output for identical bits.
std::string format_double(double x);

// Measure files: {"dim": d, "atoms": [[d*d row-major floats], ...],
// "weights": [...]}. A weight-sum deviation above 1e-9 is rejected unless
// renormalize is set; smaller drift is renormalized away.
measures::FiniteMatrixMeasure read_measure_file(const std::string& path, bool renormalize = false);
measures::FiniteMatrixMeasure parse_measure_json(const std::string& text, const std::string& origin,
                                                 bool renormalize = false);
void write_measure_file(const std::string& path, const measures::FiniteMatrixMeasure& nu);

// Markov chain files: {"dim": d, "P": [[...], ...], "fibers": [[d*d floats], ...]}.
mc::MarkovCocycle read_markov_file(const std::string& path);

// Everything a run needs to be reproduced; embedded verbatim in every output
// file. Wall time and thread count are execution details and stay out.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> flags;  // sorted by name
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;

    void set_flag(const std::string& name, const std::string& value);
    std::string json_line() const;
};

struct EstimateRecord {
    std::string quantity;
    double value = 0.0;
    double std_error = 0.0;
    long n = 0;
    long T = 0;
    std::uint64_t seed = 0;
};

std::string to_json_line(const EstimateRecord& rec);

// CSV with a leading "# manifest ..." comment line.
void write_csv(const std::string& path, const RunManifest& manifest,
               const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

void write_records(const std::string& path, const RunManifest& manifest,
                   const std::vector<EstimateRecord>& records);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace lyaplab::io
