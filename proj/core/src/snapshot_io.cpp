#include "ftdoa/snapshot_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "ftdoa/error.hpp"

namespace ftdoa {

void write_snapshot_csv(std::ostream& out, const Snapshot& x) {
    out << "index,re,im\n" << std::setprecision(17);
    for (Eigen::Index i = 0; i < x.values.size(); ++i) {
        out << i + 1 << ',' << x.values(i).real() << ',' << x.values(i).imag() << '\n';
    }
}

void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& x) {
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    }
    write_snapshot_csv(out, x);
    if (!out) {
        throw Error(ErrorKind::Io, "write failed for " + path.string());
    }
}

namespace {

double parse_number(const std::string& field, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(field, &pos);
        if (field.find_first_not_of(" \t\r", pos) != std::string::npos) {
            throw std::invalid_argument(field);
        }
        return v;
    } catch (const std::exception&) {
        throw Error(ErrorKind::InvalidInput,
                    "line " + std::to_string(line_no) + ": bad number '" + field + "'");
    }
}

}  // namespace

Snapshot read_snapshot_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorKind::InvalidInput, "snapshot CSV is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "index,re,im") {
        throw Error(ErrorKind::InvalidInput, "snapshot CSV header must be 'index,re,im'");
    }
    std::vector<cdouble> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        std::istringstream row(line);
        std::string idx, re, im, extra;
        if (!std::getline(row, idx, ',') || !std::getline(row, re, ',') || !std::getline(row, im, ',') ||
            std::getline(row, extra, ',')) {
            throw Error(ErrorKind::InvalidInput, "line " + std::to_string(line_no) + ": expected 3 columns");
        }
        const double index = parse_number(idx, line_no);
        if (index != static_cast<double>(values.size() + 1)) {
            throw Error(ErrorKind::InvalidInput,
                        "line " + std::to_string(line_no) + ": indices must run 1..M in order");
        }
        const cdouble v(parse_number(re, line_no), parse_number(im, line_no));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw Error(ErrorKind::InvalidInput, "line " + std::to_string(line_no) + ": non-finite value");
        }
        values.push_back(v);
    }
    if (values.empty()) {
        throw Error(ErrorKind::InvalidInput, "snapshot CSV has no rows");
    }
    Snapshot out;
    out.values = Eigen::Map<const ComplexVector>(values.data(), static_cast<Eigen::Index>(values.size()));
    return out;
}

Snapshot read_snapshot_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot open " + path.string());
    }
    return read_snapshot_csv(in);
}

}  // namespace ftdoa
