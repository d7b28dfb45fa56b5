#include "ssfs/dataio.hpp"
#include "ssfs/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace ssfs {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool parse_double(const std::string& raw, double& out) {
    const std::string s = trim(raw);
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

struct RawTable {
    std::vector<std::string> header;  // empty when has_header == false
    std::vector<std::vector<std::string>> rows;
};

RawTable read_table(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    RawTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (first && has_header) {
            for (auto& f : fields) t.header.push_back(trim(f));
            first = false;
            continue;
        }
        first = false;
        t.rows.push_back(std::move(fields));
    }
    if (t.rows.empty()) throw std::runtime_error("empty file: " + path);
    return t;
}

// Parses the table body into a matrix, skipping column `skip` (-1 for none).
// Error positions use 0-based data-row and file-column indices.
Eigen::MatrixXd parse_body(const RawTable& t, int skip) {
    const int n = static_cast<int>(t.rows.size());
    const int width = static_cast<int>(t.rows[0].size());
    const int p = skip >= 0 ? width - 1 : width;
    if (p < 1) throw std::runtime_error("no feature columns");
    Eigen::MatrixXd m(n, p);
    for (int i = 0; i < n; ++i) {
        const auto& row = t.rows[static_cast<std::size_t>(i)];
        if (static_cast<int>(row.size()) != width)
            throw std::runtime_error("parse error: row " + std::to_string(i) + " has " +
                                     std::to_string(row.size()) + " fields, expected " +
                                     std::to_string(width));
        int c = 0;
        for (int j = 0; j < width; ++j) {
            if (j == skip) continue;
            double v;
            if (!parse_double(row[static_cast<std::size_t>(j)], v))
                throw std::runtime_error("parse error: row " + std::to_string(i) + ", column " +
                                         std::to_string(j) + ": '" +
                                         trim(row[static_cast<std::size_t>(j)]) +
                                         "' is not numeric");
            if (!std::isfinite(v))
                throw std::runtime_error("parse error: row " + std::to_string(i) + ", column " +
                                         std::to_string(j) + ": non-finite value");
            m(i, c++) = v;
        }
    }
    return m;
}

std::vector<std::string> make_names(const RawTable& t, int skip, int p) {
    std::vector<std::string> names;
    if (!t.header.empty()) {
        for (int j = 0; j < static_cast<int>(t.header.size()); ++j)
            if (j != skip) names.push_back(t.header[static_cast<std::size_t>(j)]);
    } else {
        for (int j = 0; j < p; ++j) names.push_back("f" + std::to_string(j));
    }
    return names;
}

std::string format_double(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

} // namespace

DataMatrix load_matrix(const std::string& path, bool has_header) {
    const RawTable t = read_table(path, has_header);
    DataMatrix out;
    out.values = parse_body(t, -1);
    out.feature_names = make_names(t, -1, static_cast<int>(out.values.cols()));
    return out;
}

LabeledDataset load_labeled_matrix(const std::string& path, bool has_header,
                                   const std::string& label_column) {
    const RawTable t = read_table(path, has_header);
    if (t.header.empty()) throw std::runtime_error("label column requires a header row");
    int skip = -1;
    for (int j = 0; j < static_cast<int>(t.header.size()); ++j)
        if (t.header[static_cast<std::size_t>(j)] == label_column) skip = j;
    if (skip < 0) throw std::runtime_error("label column '" + label_column + "' not found");

    LabeledDataset ds;
    ds.data.values = parse_body(t, skip);
    ds.data.feature_names = make_names(t, skip, static_cast<int>(ds.data.values.cols()));

    std::unordered_map<std::string, int> ids;  // class id by first appearance
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        if (skip >= static_cast<int>(t.rows[i].size()))
            throw std::runtime_error("parse error: row " + std::to_string(i) +
                                     " missing label field");
        const std::string key = trim(t.rows[i][static_cast<std::size_t>(skip)]);
        auto [it, inserted] = ids.emplace(key, static_cast<int>(ids.size()));
        ds.labels.push_back(it->second);
    }
    ds.num_classes = static_cast<int>(ids.size());
    return ds;
}

DataMatrix zscore_normalize(const DataMatrix& x) {
    const int n = x.n(), p = x.p();
    if (n < 2) throw std::runtime_error("z-scoring requires at least 2 samples");
    DataMatrix out = x;
    for (int j = 0; j < p; ++j) {
        const double mean = x.values.col(j).mean();
        const double ss = (x.values.col(j).array() - mean).square().sum();
        const double sd = std::sqrt(ss / (n - 1));
        if (sd < 1e-15 * (1.0 + std::abs(mean)))
            out.values.col(j).setZero();
        else
            out.values.col(j) = (x.values.col(j).array() - mean) / sd;
    }
    out.normalized = true;
    return out;
}

void write_ranking(const FeatureRanking& r, const std::string& path, int top_l) {
    const int p = static_cast<int>(r.scores.size());
    if (p == 0) throw std::runtime_error("empty ranking");
    int rows = top_l <= 0 ? p : top_l;
    if (rows > p) throw std::runtime_error("requested " + std::to_string(rows) +
                                           " rows from a ranking of " + std::to_string(p));
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << "rank,feature_index,feature_name,score\n";
    for (int rank = 0; rank < rows; ++rank) {
        const int f = r.order[static_cast<std::size_t>(rank)];
        const std::string name = f < static_cast<int>(r.feature_names.size())
                                     ? r.feature_names[static_cast<std::size_t>(f)]
                                     : "f" + std::to_string(f);
        out << rank << ',' << f << ',' << name << ','
            << format_double(r.scores(f), "%.10g") << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void save_matrix(const DataMatrix& x, const std::string& path, bool with_header) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    if (with_header) {
        for (int j = 0; j < x.p(); ++j)
            out << (j ? "," : "") << x.feature_names[static_cast<std::size_t>(j)];
        out << '\n';
    }
    for (int i = 0; i < x.n(); ++i) {
        for (int j = 0; j < x.p(); ++j)
            out << (j ? "," : "") << format_double(x.values(i, j), "%.17g");
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace ssfs
