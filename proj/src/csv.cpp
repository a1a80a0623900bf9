#include "osrec/csv.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace osrec {

namespace {

const char* kHeader = "object_id,class_id,stiffness,viscosity,restitution,friction";

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s, int line_no, const char* field) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw DataError("line " + std::to_string(line_no) + ": field '" +
                        field + "' is not a number: '" + s + "'");
    return value;
}

long parse_long(const std::string& s, int line_no, const char* field) {
    long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw DataError("line " + std::to_string(line_no) + ": field '" +
                        field + "' is not an integer: '" + s + "'");
    return value;
}

}  // namespace

Dataset load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    {
        auto fields = split_fields(line);
        std::string joined;
        for (std::size_t i = 0; i < fields.size(); ++i)
            joined += (i ? "," : "") + fields[i];
        if (joined != kHeader)
            throw DataError(path + ": bad header, expected '" +
                            std::string(kHeader) + "'");
    }

    Dataset ds;
    std::map<long, int> dense_id;  // file class label -> 1..G
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_fields(line);
        if (fields.size() != 6)
            throw DataError("line " + std::to_string(line_no) + ": expected 6 fields, got " +
                            std::to_string(fields.size()));

        DatasetRow row;
        row.object_id = fields[0];
        const long file_class = parse_long(fields[1], line_no, "class_id");
        const double k = parse_double(fields[2], line_no, "stiffness");
        const double n = parse_double(fields[3], line_no, "viscosity");
        const double p = parse_double(fields[4], line_no, "restitution");
        const double u = parse_double(fields[5], line_no, "friction");
        if (auto msg = PropertySample::check(k, n, p, u); !msg.empty())
            throw DataError("line " + std::to_string(line_no) + ": " + msg);
        row.sample = {k, n, p, u};

        auto it = dense_id.find(file_class);
        if (it == dense_id.end()) {
            it = dense_id.emplace(file_class, ds.class_count + 1).first;
            ++ds.class_count;
            ds.class_sizes.push_back(0);
        }
        row.class_id = it->second;
        ++ds.class_sizes[row.class_id - 1];
        ds.rows.push_back(std::move(row));
    }
    if (ds.rows.empty()) throw DataError(path + ": empty dataset");
    return ds;
}

void save_csv(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << kHeader << "\n";
    std::ostringstream buf;
    buf.precision(17);
    for (const auto& row : dataset.rows) {
        buf.str("");
        buf << row.object_id << ',' << row.class_id << ',' << row.sample.stiffness
            << ',' << row.sample.viscosity << ',' << row.sample.restitution << ','
            << row.sample.friction << '\n';
        out << buf.str();
    }
    if (!out) throw DataError("write failed for '" + path + "'");
}

}  // namespace osrec
