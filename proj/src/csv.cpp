#include "specreg/csv.hpp"

#include <cmath>
#include <cstdio>

#include "specreg/error.hpp"

namespace specreg::csv {

Row split_line(std::string_view line) {
    Row fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::vector<Row> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::vector<Row> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
            line.erase(0, 3);
        }
        first = false;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        rows.push_back(split_line(line));
    }
    return rows;
}

std::string format_number(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

Writer::Writer(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) {
        throw Error("cannot write " + path.string());
    }
}

void Writer::write_row(const Row& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out_ << ',';
        }
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\n") != std::string::npos) {
            out_ << '"';
            for (char ch : f) {
                if (ch == '"') {
                    out_ << '"';
                }
                out_ << ch;
            }
            out_ << '"';
        } else {
            out_ << f;
        }
    }
    out_ << '\n';
    if (!out_) {
        throw Error("write failed: " + path_.string());
    }
}

void Writer::close() {
    out_.close();
    if (!out_) {
        throw Error("write failed: " + path_.string());
    }
}

}  // namespace specreg::csv
