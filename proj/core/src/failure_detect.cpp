#include "ftdoa/failure_detect.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ftdoa/error.hpp"

namespace ftdoa {

LocationSet LocationSet::all(std::size_t total) {
    LocationSet out;
    out.total = total;
    out.working.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        out.working[i] = i;
    }
    return out;
}

LocationSet LocationSet::without(std::size_t total, const std::vector<std::size_t>& failed) {
    std::vector<bool> dead(total, false);
    for (std::size_t idx : failed) {
        if (idx >= total) {
            throw Error(ErrorKind::Domain, "failed index out of range");
        }
        dead[idx] = true;
    }
    LocationSet out;
    out.total = total;
    for (std::size_t i = 0; i < total; ++i) {
        if (!dead[i]) {
            out.working.push_back(i);
        }
    }
    return out;
}

std::vector<std::size_t> LocationSet::failed() const {
    std::vector<std::size_t> out;
    std::size_t next = 0;
    for (std::size_t i = 0; i < total; ++i) {
        if (next < working.size() && working[next] == i) {
            ++next;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

void LocationSet::validate() const {
    for (std::size_t k = 0; k < working.size(); ++k) {
        if (working[k] >= total) {
            throw Error(ErrorKind::Domain, "working index out of range");
        }
        if (k > 0 && working[k] <= working[k - 1]) {
            throw Error(ErrorKind::Domain, "working indices must be strictly ascending");
        }
    }
}

std::string LocationSet::to_csv_line() const {
    std::ostringstream out;
    for (std::size_t k = 0; k < working.size(); ++k) {
        if (k > 0) {
            out << ',';
        }
        out << working[k] + 1;
    }
    return out.str();
}

LocationSet LocationSet::from_csv_line(const std::string& line, std::size_t total) {
    LocationSet out;
    out.total = total;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) {
        const auto first = field.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        std::size_t pos = 0;
        long long one_based = 0;
        try {
            one_based = std::stoll(field.substr(first), &pos);
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidInput, "bad element index '" + field + "'");
        }
        if (one_based < 1) {
            throw Error(ErrorKind::Domain, "element indices are 1-based");
        }
        out.working.push_back(static_cast<std::size_t>(one_based - 1));
    }
    std::sort(out.working.begin(), out.working.end());
    out.validate();
    return out;
}

LocationSet detect(const Snapshot& prev, const Snapshot& curr, double epsilon) {
    if (prev.size() != curr.size()) {
        std::ostringstream msg;
        msg << "snapshot lengths differ (" << prev.size() << " vs " << curr.size() << ")";
        throw Error(ErrorKind::Shape, msg.str());
    }
    if (!(epsilon > 0.0)) {
        throw Error(ErrorKind::Parameter, "detection threshold must be positive");
    }
    const double dead_threshold = epsilon * epsilon;
    LocationSet out;
    out.total = curr.size();
    for (Eigen::Index i = 0; i < curr.values.size(); ++i) {
        const bool stuck = std::abs(prev.values(i) - curr.values(i)) < epsilon;
        const bool dead = std::abs(curr.values(i)) < dead_threshold;
        if (!stuck && !dead) {
            out.working.push_back(static_cast<std::size_t>(i));
        }
    }
    return out;
}

}  // namespace ftdoa
