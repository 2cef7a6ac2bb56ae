#include "qstat/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qstat/errors.hpp"

namespace qstat {

std::string format_full(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_line(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
    }
    out += '\n';
    return out;
}

std::string complex_table_csv(const Matrix& table, bool post_major) {
    std::string out = "a_index,b_index,re,im\n";
    for (int r = 0; r < table.rows(); ++r)
        for (int c = 0; c < table.cols(); ++c) {
            int a = post_major ? c : r;
            int b = post_major ? r : c;
            out += csv_line({std::to_string(a), std::to_string(b),
                             format_full(table(r, c).real()), format_full(table(r, c).imag())});
        }
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SyntaxError("cannot open '" + path + "' for writing");
    f << content;
    if (!f) throw SyntaxError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw SyntaxError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace qstat
