#ifndef CENTRALFORCE_REPORT_HPP
#define CENTRALFORCE_REPORT_HPP

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include "errors.hpp"

namespace cforce {

/// Shortest round-trip formatting; keeps emitted files byte-stable across
/// runs with the same inputs.
inline std::string fmt_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

/// CSV with a header row and a JSON sidecar describing column units.
class CsvWriter {
public:
    CsvWriter(const std::string& path, std::vector<std::pair<std::string, std::string>> columns)
        : path_(path), columns_(std::move(columns)), out_(path) {
        if (!out_)
            throw AnalysisError("cannot open " + path + " for writing");
        for (std::size_t i = 0; i < columns_.size(); ++i)
            out_ << (i ? "," : "") << columns_[i].first;
        out_ << "\n";
    }

    void row(const std::vector<double>& values) {
        if (values.size() != columns_.size())
            throw AnalysisError("CSV row width mismatch in " + path_);
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << (i ? "," : "") << fmt_double(values[i]);
        out_ << "\n";
    }

    /// writes <path>.meta.json with the column/unit table
    void close_with_sidecar() {
        out_.close();
        nlohmann::json meta;
        for (const auto& [name, unit] : columns_)
            meta["columns"].push_back({{"name", name}, {"unit", unit}});
        std::ofstream side(path_ + ".meta.json");
        side << meta.dump(2) << "\n";
    }

private:
    std::string path_;
    std::vector<std::pair<std::string, std::string>> columns_;
    std::ofstream out_;
};

inline void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out)
        throw AnalysisError("cannot open " + path + " for writing");
    out << j.dump(2) << "\n";
}

}  // namespace cforce

#endif
