#include "robsparse/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "robsparse/errors.hpp"

namespace robsparse {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_dataset(std::ostream& os, const Dataset& data, bool paired, bool include_labels) {
    const bool labeled = include_labels && data.hidden_labels.has_value();
    const int n = data.size();
    const int d = n > 0 ? int(data.samples[0].x.size()) : 0;
    os << "# epsilon=" << format_double(data.epsilon) << " seed=" << data.seed << "\n";
    if (labeled) os << "label,";
    if (paired) os << "y,";
    for (int j = 0; j < d; ++j) os << "x" << j << (j + 1 < d ? "," : "");
    os << "\n";
    for (int i = 0; i < n; ++i) {
        const Observation& o = data.samples[i];
        if (int(o.x.size()) != d) throw input_error("dataset rows have mixed dimensions");
        if (labeled) os << int((*data.hidden_labels)[i]) << ",";
        if (paired) os << format_double(o.y) << ",";
        for (int j = 0; j < d; ++j) os << format_double(o.x(j)) << (j + 1 < d ? "," : "");
        os << "\n";
    }
}

void write_dataset_file(const std::string& path, const Dataset& data, bool paired,
                        bool include_labels) {
    std::ofstream os(path);
    if (!os) throw input_error("cannot open for writing: " + path);
    write_dataset(os, data, paired, include_labels);
    if (!os) throw input_error("write failed: " + path);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& tok, int line_no) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        throw input_error("line " + std::to_string(line_no) + ": bad number '" + tok + "'");
    return v;
}

}  // namespace

Dataset read_dataset(std::istream& is) {
    Dataset data;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    bool labeled = false, paired = false;
    int d = 0;

    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (line[0] == '#') {
            double eps = 0.0;
            unsigned long long seed = 0;
            if (std::sscanf(line.c_str(), "# epsilon=%lf seed=%llu", &eps, &seed) == 2) {
                data.epsilon = eps;
                data.seed = seed;
            }
            continue;
        }
        std::vector<std::string> toks = split_csv(line);
        if (!have_header) {
            size_t k = 0;
            if (k < toks.size() && toks[k] == "label") {
                labeled = true;
                ++k;
            }
            if (k < toks.size() && toks[k] == "y") {
                paired = true;
                ++k;
            }
            d = int(toks.size() - k);
            for (int j = 0; j < d; ++j) {
                if (toks[k + j] != "x" + std::to_string(j))
                    throw input_error("line " + std::to_string(line_no) +
                                      ": expected column x" + std::to_string(j) + ", got '" +
                                      toks[k + j] + "'");
            }
            if (d == 0) throw input_error("dataset header has no covariate columns");
            if (labeled) data.hidden_labels.emplace();
            have_header = true;
            continue;
        }
        const size_t expect = size_t(d) + (labeled ? 1 : 0) + (paired ? 1 : 0);
        if (toks.size() != expect)
            throw input_error("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(expect) + " fields, got " +
                              std::to_string(toks.size()));
        size_t k = 0;
        if (labeled) {
            const double lab = parse_double(toks[k++], line_no);
            if (lab != 0.0 && lab != 1.0)
                throw input_error("line " + std::to_string(line_no) + ": label must be 0 or 1");
            data.hidden_labels->push_back(lab != 0.0 ? 1 : 0);
        }
        Observation o;
        if (paired) o.y = parse_double(toks[k++], line_no);
        o.x = Vector(d);
        for (int j = 0; j < d; ++j) o.x(j) = parse_double(toks[k + j], line_no);
        data.samples.push_back(std::move(o));
    }
    if (!have_header) throw input_error("dataset stream has no header line");
    return data;
}

Dataset read_dataset_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw input_error("cannot open for reading: " + path);
    return read_dataset(is);
}

}  // namespace robsparse
