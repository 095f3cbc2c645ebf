// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "qelm/forwardmodel.hpp"

namespace qelm::forward {

DatasetParseError::DatasetParseError(std::size_t line, const std::string& what)
    : IoError("dataset line " + std::to_string(line) + ": " + what), line_(line) {}

void write_dataset(const SpectralDataset& ds, std::ostream& out) {
    out << "# seed=" << ds.seed << " nbins=" << ds.wavelengths.size() << '\n';
    for (std::size_t i = 0; i < ds.wavelengths.size(); ++i) {
        if (i) out << ',';
        out << format_double(ds.wavelengths[i]);
    }
    out << '\n';
    for (const auto& rec : ds.records) {
        if (rec.depths.size() != ds.wavelengths.size())
            throw IoError("record depth count does not match the wavelength grid");
        const auto p = rec.params.to_array();
        for (std::size_t k = 0; k < kNumParams; ++k) {
            if (k) out << ',';
            out << format_double(p[k]);
        }
        for (double d : rec.depths) out << ',' << format_double(d);
        out << '\n';
    }
}

void write_dataset(const SpectralDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_dataset(ds, out);
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t lineno) {
    std::vector<double> values;
    const char* p = line.data();
    const char* end = p + line.size();
    if (end > p && end[-1] == '\r') --end;
    while (true) {
        const char* comma = std::find(p, end, ',');
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(p, comma, v);
        if (ec != std::errc{} || ptr != comma)
            throw DatasetParseError(lineno, "column " + std::to_string(values.size() + 1) + " is not a number: '" +
                                                std::string(p, comma) + "'");
        values.push_back(v);
        if (comma == end) break;
        p = comma + 1;
    }
    return values;
}

std::uint64_t parse_header_field(const std::string& header, const std::string& key) {
    const auto pos = header.find(key + "=");
    if (pos == std::string::npos) throw DatasetParseError(1, "header is missing '" + key + "='");
    const char* b = header.data() + pos + key.size() + 1;
    const char* e = header.data() + header.size();
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || ptr == b) throw DatasetParseError(1, "header field '" + key + "' is not an integer");
    return v;
}

} // namespace

SpectralDataset read_dataset(std::istream& in) {
    std::string header;
    if (!std::getline(in, header) || header.empty()) throw DatasetParseError(1, "empty file");
    if (header.rfind("# ", 0) != 0) throw DatasetParseError(1, "malformed header, expected '# seed=<u64> nbins=<int>'");

    SpectralDataset ds;
    ds.seed = parse_header_field(header, "seed");
    const std::size_t nbins = parse_header_field(header, "nbins");
    if (nbins == 0) throw DatasetParseError(1, "nbins must be positive");

    std::string line;
    if (!std::getline(in, line)) throw DatasetParseError(2, "missing wavelength grid line");
    ds.wavelengths = parse_row(line, 2);
    if (ds.wavelengths.size() != nbins)
        throw DatasetParseError(2, "wavelength grid has " + std::to_string(ds.wavelengths.size()) +
                                       " values, header says nbins=" + std::to_string(nbins));
    for (std::size_t i = 1; i < nbins; ++i)
        if (!(ds.wavelengths[i] > ds.wavelengths[i - 1]))
            throw DatasetParseError(2, "wavelength grid not strictly increasing");

    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto row = parse_row(line, lineno);
        if (row.size() != kNumParams + nbins)
            throw DatasetParseError(lineno, "expected " + std::to_string(kNumParams + nbins) + " columns, found " +
                                                std::to_string(row.size()));
        SpectralDataset::Record rec;
        std::array<double, kNumParams> p{};
        std::copy_n(row.begin(), kNumParams, p.begin());
        rec.params = AtmosphericParams::from_array(p);
        rec.depths.assign(row.begin() + kNumParams, row.end());
        ds.records.push_back(std::move(rec));
    }
    if (ds.records.empty()) throw DatasetParseError(lineno, "no spectra in file");
    return ds;
}

SpectralDataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_dataset(in);
}

} // namespace qelm::forward
