#include "stagewise/dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>

namespace stagewise {

const CycleRecord& BatteryDataset::cycle(int index_1based) const {
    if (index_1based < 1 || index_1based > n_cycles())
        throw UsageError("cycle index " + std::to_string(index_1based) + " outside 1.." +
                         std::to_string(n_cycles()));
    return cycles[static_cast<size_t>(index_1based - 1)];
}

void BatteryDataset::validate() const {
    for (size_t i = 0; i < cycles.size(); ++i) {
        const CycleRecord& c = cycles[i];
        if (c.cycle_index != static_cast<int>(i) + 1)
            throw IntegrityError("cycle indices not contiguous from 1: position " +
                                 std::to_string(i + 1) + " holds index " +
                                 std::to_string(c.cycle_index));
        if (c.samples() < 2)
            throw IntegrityError("cycle " + std::to_string(c.cycle_index) +
                                 " has fewer than 2 samples");
        if (c.channels.rows() != c.time_s.size() || c.channels.cols() != kNumChannels)
            throw IntegrityError("cycle " + std::to_string(c.cycle_index) +
                                 " has misaligned channel matrix");
        for (Eigen::Index k = 1; k < c.time_s.size(); ++k)
            if (!(c.time_s[k] > c.time_s[k - 1]))
                throw IntegrityError("cycle " + std::to_string(c.cycle_index) +
                                     " time not strictly increasing at row " +
                                     std::to_string(k));
        if (!c.time_s.allFinite() || !c.channels.allFinite())
            throw IntegrityError("cycle " + std::to_string(c.cycle_index) +
                                 " contains non-finite values");
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_field(const std::string& s, int line_no, const char* col) {
    const char* b = s.data();
    const char* e = b + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (*(e - 1) == ' ' || *(e - 1) == '\t')) --e;
    if (b == e)
        throw IntegrityError("missing value in column '" + std::string(col) + "' at line " +
                             std::to_string(line_no));
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e)
        throw SchemaError("unparsable number '" + s + "' in column '" + std::string(col) +
                          "' at line " + std::to_string(line_no));
    return v;
}

std::string stem_of(const std::string& path) {
    size_t slash = path.find_last_of("/\\");
    std::string base = (slash == std::string::npos) ? path : path.substr(slash + 1);
    size_t dot = base.find_last_of('.');
    return (dot == std::string::npos) ? base : base.substr(0, dot);
}

} // namespace

BatteryDataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw UsageError("cannot open input file: " + path);

    std::string header;
    if (!std::getline(in, header))
        throw SchemaError("empty file: " + path);
    {
        std::vector<std::string> cols = split_csv_line(header);
        const std::vector<std::string> want = {"cycle", "time_s", "voltage_v", "current_a",
                                               "temperature_c"};
        if (cols != want) {
            std::string got;
            for (const auto& c : cols) got += (got.empty() ? "" : ",") + c;
            throw SchemaError("header mismatch: expected "
                              "'cycle,time_s,voltage_v,current_a,temperature_c', got '" +
                              got + "'");
        }
    }

    struct Rows {
        std::vector<double> t;
        std::vector<std::array<double, kNumChannels>> ch;
    };
    std::map<long, Rows> groups;  // keyed by cycle index; file order kept inside each group

    std::string line;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> f = split_csv_line(line);
        if (f.size() != 5)
            throw SchemaError("expected 5 fields at line " + std::to_string(line_no) + ", got " +
                              std::to_string(f.size()));
        double ci = parse_field(f[0], line_no, "cycle");
        long idx = static_cast<long>(ci);
        if (static_cast<double>(idx) != ci)
            throw SchemaError("non-integer cycle index at line " + std::to_string(line_no));
        Rows& g = groups[idx];
        g.t.push_back(parse_field(f[1], line_no, "time_s"));
        g.ch.push_back({parse_field(f[2], line_no, "voltage_v"),
                        parse_field(f[3], line_no, "current_a"),
                        parse_field(f[4], line_no, "temperature_c")});
    }
    if (groups.empty())
        throw SchemaError("no data rows in " + path);

    BatteryDataset ds;
    ds.name = stem_of(path);
    ds.cycles.reserve(groups.size());
    for (auto& [idx, rows] : groups) {
        CycleRecord c;
        c.cycle_index = static_cast<int>(idx);
        Eigen::Index n = static_cast<Eigen::Index>(rows.t.size());
        c.time_s.resize(n);
        c.channels.resize(n, kNumChannels);
        for (Eigen::Index k = 0; k < n; ++k) {
            c.time_s[k] = rows.t[static_cast<size_t>(k)];
            for (int j = 0; j < kNumChannels; ++j)
                c.channels(k, j) = rows.ch[static_cast<size_t>(k)][static_cast<size_t>(j)];
        }
        ds.cycles.push_back(std::move(c));
    }
    ds.validate();
    return ds;
}

void save_dataset(const BatteryDataset& ds, const std::string& path) {
    ds.validate();
    std::ofstream out(path);
    if (!out)
        throw UsageError("cannot open output file: " + path);
    out << "cycle,time_s,voltage_v,current_a,temperature_c\n";
    char buf[512];
    for (const CycleRecord& c : ds.cycles) {
        for (Eigen::Index k = 0; k < c.samples(); ++k) {
            std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", c.cycle_index,
                          c.time_s[k], c.channels(k, 0), c.channels(k, 1), c.channels(k, 2));
            out << buf;
        }
    }
    if (!out)
        throw UsageError("write failed: " + path);
}

std::vector<Eigen::MatrixXd> truncate_to_min_length(const std::vector<Eigen::MatrixXd>& mats,
                                                    Eigen::Index* out_min_rows) {
    if (mats.empty())
        throw UsageError("truncate_to_min_length: empty input");
    Eigen::Index m = mats.front().rows();
    for (const auto& x : mats) {
        if (x.rows() < 1)
            throw UsageError("truncate_to_min_length: matrix with zero rows");
        m = std::min(m, x.rows());
    }
    std::vector<Eigen::MatrixXd> out;
    out.reserve(mats.size());
    for (const auto& x : mats) out.push_back(x.topRows(m));
    if (out_min_rows) *out_min_rows = m;
    return out;
}

} // namespace stagewise
