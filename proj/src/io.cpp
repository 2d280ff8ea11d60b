#include "lyaplab/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lyaplab/version.hpp"

namespace lyaplab::io {

using nlohmann::json;

namespace {

int line_of_byte(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::ostringstream os;
        os << origin << ":" << line_of_byte(text, e.byte) << ": " << e.what();
        throw ParseError(os.str());
    }
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

measures::FiniteMatrixMeasure parse_measure_json(const std::string& text, const std::string& origin,
                                                 bool renormalize) {
    const json j = parse_json(text, origin);
    try {
        if (!j.contains("dim") || !j.contains("atoms") || !j.contains("weights"))
            throw ParseError(origin + ": measure file needs fields dim, atoms, weights");
        const int d = j.at("dim").get<int>();
        if (d < 1) throw ParseError(origin + ": dim must be positive");
        const auto& atoms_j = j.at("atoms");
        const auto& weights_j = j.at("weights");
        if (!atoms_j.is_array() || !weights_j.is_array() || atoms_j.size() != weights_j.size())
            throw ParseError(origin + ": atoms and weights must be arrays of equal length");

        std::vector<double> weights = weights_j.get<std::vector<double>>();
        double sum = 0.0;
        for (double w : weights) sum += w;
        if (std::abs(sum - 1.0) > 1e-9 && !renormalize) {
            std::ostringstream os;
            os << origin << ": weights sum to " << format_double(sum)
               << " (tolerance 1e-9); pass --renormalize to rescale";
            throw ParseError(os.str());
        }

        std::vector<gl::SquareMatrix> atoms;
        atoms.reserve(atoms_j.size());
        for (std::size_t a = 0; a < atoms_j.size(); ++a) {
            const auto entries = atoms_j[a].get<std::vector<double>>();
            if (static_cast<int>(entries.size()) != d * d) {
                std::ostringstream os;
                os << origin << ": atom " << a << " has " << entries.size() << " entries, expected "
                   << d * d;
                throw ParseError(os.str());
            }
            Eigen::MatrixXd m(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) m(r, c) = entries[static_cast<std::size_t>(r * d + c)];
            atoms.emplace_back(std::move(m));
        }
        return measures::FiniteMatrixMeasure(std::move(atoms), std::move(weights), true);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

measures::FiniteMatrixMeasure read_measure_file(const std::string& path, bool renormalize) {
    return parse_measure_json(read_text_file(path), path, renormalize);
}

void write_measure_file(const std::string& path, const measures::FiniteMatrixMeasure& nu) {
    json j;
    j["dim"] = nu.dim();
    json atoms = json::array();
    for (const auto& a : nu.atoms()) {
        json rowmajor = json::array();
        for (int r = 0; r < a.dim(); ++r)
            for (int c = 0; c < a.dim(); ++c) rowmajor.push_back(a.entries()(r, c));
        atoms.push_back(std::move(rowmajor));
    }
    j["atoms"] = std::move(atoms);
    j["weights"] = nu.weights();
    write_text_file(path, j.dump(2) + "\n");
}

mc::MarkovCocycle read_markov_file(const std::string& path) {
    const std::string text = read_text_file(path);
    const json j = parse_json(text, path);
    try {
        const int d = j.at("dim").get<int>();
        const auto rows = j.at("P").get<std::vector<std::vector<double>>>();
        const int n = static_cast<int>(rows.size());
        Eigen::MatrixXd P(n, n);
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != n)
                throw ParseError(path + ": transition matrix must be square");
            for (int c = 0; c < n; ++c) P(i, c) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
        }
        const auto fibers_j = j.at("fibers").get<std::vector<std::vector<double>>>();
        std::vector<gl::SquareMatrix> fibers;
        for (std::size_t f = 0; f < fibers_j.size(); ++f) {
            if (static_cast<int>(fibers_j[f].size()) != d * d) {
                std::ostringstream os;
                os << path << ": fiber " << f << " has " << fibers_j[f].size()
                   << " entries, expected " << d * d;
                throw ParseError(os.str());
            }
            Eigen::MatrixXd m(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) m(r, c) = fibers_j[f][static_cast<std::size_t>(r * d + c)];
            fibers.emplace_back(std::move(m));
        }
        return mc::MarkovCocycle(std::move(P), std::move(fibers));
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void RunManifest::set_flag(const std::string& name, const std::string& value) {
    for (auto& [k, v] : flags) {
        if (k == name) {
            v = value;
            return;
        }
    }
    flags.emplace_back(name, value);
}

std::string RunManifest::json_line() const {
    auto sorted = flags;
    std::sort(sorted.begin(), sorted.end());
    json jf = json::object();
    for (const auto& [k, v] : sorted) jf[k] = v;
    json j;
    j["command"] = command;
    j["flags"] = std::move(jf);
    j["seed"] = seed;
    j["version"] = kVersion;
    j["outputs"] = outputs;
    return "# manifest " + j.dump();
}

std::string to_json_line(const EstimateRecord& rec) {
    // hand-rolled so float formatting matches the CSV writers bit for bit
    std::ostringstream os;
    os << "{\"quantity\":\"" << rec.quantity << "\",\"value\":" << format_double(rec.value)
       << ",\"std_error\":" << format_double(rec.std_error) << ",\"n\":" << rec.n
       << ",\"T\":" << rec.T << ",\"seed\":" << rec.seed << "}";
    return os.str();
}

void write_csv(const std::string& path, const RunManifest& manifest,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream os;
    os << manifest.json_line() << "\n";
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    write_text_file(path, os.str());
}

void write_records(const std::string& path, const RunManifest& manifest,
                   const std::vector<EstimateRecord>& records) {
    std::ostringstream os;
    os << manifest.json_line() << "\n";
    for (const auto& r : records) os << to_json_line(r) << "\n";
    write_text_file(path, os.str());
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << contents;
    if (!out) throw InputError("write failed for " + path);
}

}  // namespace lyaplab::io
