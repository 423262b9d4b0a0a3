#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace specreg::csv {

using Row = std::vector<std::string>;

/// Reads a comma-separated UTF-8 file. Double-quoted fields may contain commas
/// and doubled quotes. A UTF-8 byte-order mark and trailing CR are stripped.
std::vector<Row> read_file(const std::filesystem::path& path);

Row split_line(std::string_view line);

/// Formats a double with 12 significant digits; non-finite values become
/// `nan`, `inf` or `-inf`.
std::string format_number(double value);

/// Line-oriented CSV writer. Fields are quoted only when required.
class Writer {
public:
    explicit Writer(const std::filesystem::path& path);

    void write_row(const Row& fields);

    /// Flushes and closes; throws when the data did not reach the file.
    void close();

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
};

}  // namespace specreg::csv
