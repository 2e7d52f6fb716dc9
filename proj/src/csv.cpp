#include "pptour/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pptour/errors.hpp"
#include "pptour/simdata.hpp"

namespace pptour {

namespace fs = std::filesystem;

CsvFile read_csv_raw(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());
    CsvFile out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && in.eof()) break;
        std::vector<std::string> cells;
        std::string cell;
        std::stringstream ss(line);
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        if (first) {
            out.header = std::move(cells);
            first = false;
        } else {
            out.rows.push_back(std::move(cells));
        }
    }
    if (first) throw DataError("file has no header row: " + path.string());
    return out;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void atomic_write_text(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write file: " + tmp.string());
        out << content;
    }
    fs::rename(tmp, path);
}

namespace {

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    if (cell.empty())
        throw DataError("missing value at row " + std::to_string(row) + ", column " +
                        std::to_string(col));
    const char* s = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    while (end && *end == ' ') ++end;
    if (end == s || (end && *end != '\0'))
        throw DataError("non-numeric cell '" + cell + "' at row " + std::to_string(row) +
                        ", column " + std::to_string(col));
    return v;
}

} // namespace

DataMatrix load_csv(const fs::path& path, const std::vector<std::string>& drop_columns,
                    const std::string& scale_mode) {
    const CsvFile raw = read_csv_raw(path);

    std::vector<bool> keep(raw.header.size(), true);
    for (const auto& name : drop_columns) {
        bool found = false;
        for (std::size_t j = 0; j < raw.header.size(); ++j) {
            if (raw.header[j] == name) {
                keep[j] = false;
                found = true;
            }
        }
        if (!found) throw DataError("unknown column to drop: " + name);
    }

    DataMatrix x;
    for (std::size_t j = 0; j < raw.header.size(); ++j)
        if (keep[j]) x.column_names.push_back(raw.header[j]);
    const auto p = static_cast<Eigen::Index>(x.column_names.size());
    x.values.resize(static_cast<Eigen::Index>(raw.rows.size()), p);
    for (std::size_t i = 0; i < raw.rows.size(); ++i) {
        if (raw.rows[i].size() != raw.header.size())
            throw DataError("row " + std::to_string(i + 2) + " has " +
                            std::to_string(raw.rows[i].size()) + " cells, expected " +
                            std::to_string(raw.header.size()));
        Eigen::Index jj = 0;
        for (std::size_t j = 0; j < raw.rows[i].size(); ++j) {
            if (!keep[j]) continue;
            x.values(static_cast<Eigen::Index>(i), jj++) = parse_cell(raw.rows[i][j], i + 2, j + 1);
        }
    }
    x.validate();

    if (scale_mode == "none") return x;
    if (scale_mode == "standardize") return standardize(x);
    if (scale_mode == "minmax") return minmax_scale(x);
    if (scale_mode.rfind("sphere:", 0) == 0) {
        const int k = std::atoi(scale_mode.c_str() + 7);
        if (k < 1) throw ConfigError("bad sphere scale mode: " + scale_mode);
        return sphere_pca(x, k);
    }
    throw ConfigError("unknown scale mode: " + scale_mode);
}

void write_data_csv(const fs::path& path, const DataMatrix& x) {
    std::string out;
    for (std::size_t j = 0; j < x.column_names.size(); ++j) {
        if (j) out += ',';
        out += x.column_names[j];
    }
    out += '\n';
    for (Eigen::Index i = 0; i < x.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.values.cols(); ++j) {
            if (j) out += ',';
            out += format_double(x.values(i, j));
        }
        out += '\n';
    }
    atomic_write_text(path, out);
}

void write_frame_csv(const fs::path& path, const Frame& f) {
    std::string out = "b1,b2\n";
    for (Eigen::Index i = 0; i < f.basis.rows(); ++i) {
        out += format_double(f.basis(i, 0));
        out += ',';
        out += format_double(f.basis(i, 1));
        out += '\n';
    }
    atomic_write_text(path, out);
}

Frame read_frame_csv(const fs::path& path) {
    const CsvFile raw = read_csv_raw(path);
    Frame f;
    f.basis.resize(static_cast<Eigen::Index>(raw.rows.size()), 2);
    for (std::size_t i = 0; i < raw.rows.size(); ++i) {
        if (raw.rows[i].size() != 2) throw DataError("frame csv needs exactly 2 columns");
        f.basis(static_cast<Eigen::Index>(i), 0) = parse_cell(raw.rows[i][0], i + 2, 1);
        f.basis(static_cast<Eigen::Index>(i), 1) = parse_cell(raw.rows[i][1], i + 2, 2);
    }
    return f;
}

} // namespace pptour
