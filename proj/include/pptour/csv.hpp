#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pptour/types.hpp"

namespace pptour {

/// Raw CSV: header row plus string cells (UTF-8, comma separated, no quoting).
struct CsvFile {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvFile read_csv_raw(const std::filesystem::path& path);

/// Formats a double with 17 significant digits (lossless round-trip).
std::string format_double(double v);

/// Writes content to a temporary file and renames it into place.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

/// Numeric CSV -> DataMatrix. Reports the (1-based) row/column of the first
/// non-numeric or missing cell. scale_mode: none | standardize | minmax |
/// sphere:<k>.
DataMatrix load_csv(const std::filesystem::path& path,
                    const std::vector<std::string>& drop_columns = {},
                    const std::string& scale_mode = "none");

void write_data_csv(const std::filesystem::path& path, const DataMatrix& x);

/// Frame serialization: p rows x 2 columns, full double precision.
void write_frame_csv(const std::filesystem::path& path, const Frame& f);
Frame read_frame_csv(const std::filesystem::path& path);

} // namespace pptour
