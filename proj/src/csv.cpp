// Copyright (c) 2026 the rankprobe authors
// SPDX-License-Identifier: Apache-2.0

#include "rankprobe/csv.hpp"

#include <fstream>
#include <sstream>

#include "rankprobe/errors.hpp"

namespace rankprobe::io {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_open = false;
    std::size_t line = 1;

    auto end_field = [&] {
        row.push_back(field);
        field.clear();
        field_open = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(row);
        row.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty()) throw MalformedCsv("csv: quote inside unquoted field", line);
                quoted = true;
                field_open = true;
                break;
            case ',': end_field(); field_open = true; break;
            case '\r':
                if (i + 1 >= text.size() || text[i + 1] != '\n') {
                    throw MalformedCsv("csv: bare carriage return", line);
                }
                break;
            case '\n':
                end_row();
                ++line;
                break;
            default: field.push_back(c); break;
        }
    }
    if (quoted) throw MalformedCsv("csv: unterminated quoted field", line);
    if (!field.empty() || field_open || !row.empty()) end_row();
    return rows;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MalformedCsv("csv: cannot open " + path.string(), 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw Error("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace rankprobe::io
