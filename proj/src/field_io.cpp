#include "sblab/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace sblab {

std::string format_full(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17e", x);
    return buf;
}

namespace {

void write_header(std::ostream& os, const Grid& g, int components) {
    os << "GRID L=" << format_full(g.length()) << " N=" << g.n() << " COMPONENTS=" << components << "\n";
}

Grid parse_header(std::istream& is, int& components) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("field file: missing header");
    double L = 0.0;
    int N = 0;
    components = 0;
    if (std::sscanf(line.c_str(), "GRID L=%lf N=%d COMPONENTS=%d", &L, &N, &components) != 3)
        throw std::runtime_error("field file: malformed header: " + line);
    if (components != 1 && components != 3)
        throw std::runtime_error("field file: COMPONENTS must be 1 or 3");
    return Grid(L, N);
}

}  // namespace

void write_field(std::ostream& os, const ScalarField& f) {
    write_header(os, f.grid, 1);
    for (double v : f.values) os << format_full(v) << "\n";
}

void write_field(std::ostream& os, const VectorField& v) {
    write_header(os, v.grid, 3);
    const std::size_t n = v.grid.node_count();
    for (std::size_t i = 0; i < n; ++i)
        os << format_full(v.comp[0][i]) << " " << format_full(v.comp[1][i]) << " "
           << format_full(v.comp[2][i]) << "\n";
}

void write_field(const std::string& path, const ScalarField& f) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_field(os, f);
}

void write_field(const std::string& path, const VectorField& v) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    write_field(os, v);
}

AnyField read_field(std::istream& is) {
    int components = 0;
    Grid g = parse_header(is, components);
    const std::size_t n = g.node_count();
    if (components == 1) {
        ScalarField f(g);
        for (std::size_t i = 0; i < n; ++i)
            if (!(is >> f.values[i])) throw std::runtime_error("field file: truncated data");
        return f;
    }
    VectorField v(g);
    for (std::size_t i = 0; i < n; ++i)
        if (!(is >> v.comp[0][i] >> v.comp[1][i] >> v.comp[2][i]))
            throw std::runtime_error("field file: truncated data");
    return v;
}

AnyField read_field(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    return read_field(is);
}

}  // namespace sblab
