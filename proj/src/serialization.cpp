#include "truncpol/serialization.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include "truncpol/errors.hpp"

namespace truncpol {
namespace {

Json real_to_json(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) throw ArgumentError("serialization: NaN entry");
    return x;
}

double real_from_json(Json const& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        auto const s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw ArgumentError("serialization: expected a number, got " + j.dump());
}

Json const& field(Json const& j, char const* key) {
    auto it = j.find(key);
    if (it == j.end()) throw ArgumentError(std::string("serialization: missing field '") + key + "'");
    return *it;
}

}  // namespace

Json to_json(Vec const& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(real_to_json(v[i]));
    return out;
}

Json to_json(Mat const& m) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vec(m.row(r).transpose())));
    return out;
}

Vec vec_from_json(Json const& j) {
    if (!j.is_array()) throw ArgumentError("serialization: expected an array");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = real_from_json(j[i]);
    return v;
}

Mat mat_from_json(Json const& j) {
    if (!j.is_array() || j.empty()) throw ArgumentError("serialization: expected a nonempty matrix");
    std::size_t const cols = j[0].size();
    Mat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (j[r].size() != cols) throw ArgumentError("serialization: ragged matrix");
        m.row(static_cast<Eigen::Index>(r)) = vec_from_json(j[r]).transpose();
    }
    return m;
}

Json set_to_json(ConstraintSet const& set) {
    struct Visitor {
        Json operator()(Interval const& b) const {
            return {{"type", "interval"}, {"lower", to_json(b.lower())}, {"upper", to_json(b.upper())}};
        }
        Json operator()(HPolytope const& p) const {
            return {{"type", "hpolytope"}, {"A", to_json(p.normals())}, {"b", to_json(p.offsets())}};
        }
        Json operator()(Zonotope const& z) const {
            Json gens = z.order() == 0 ? Json::array() : to_json(z.generators());
            if (z.order() == 0)
                for (Eigen::Index r = 0; r < z.dim(); ++r) gens.push_back(Json::array());
            return {{"type", "zonotope"}, {"center", to_json(z.center())}, {"generators", gens}};
        }
        Json operator()(IntervalUnion const& u) const {
            Json members = Json::array();
            for (auto const& m : u.members()) members.push_back((*this)(m));
            return {{"type", "union"}, {"members", members}};
        }
    };
    return std::visit(Visitor{}, set);
}

Interval interval_from_json(Json const& j) {
    return Interval(vec_from_json(field(j, "lower")), vec_from_json(field(j, "upper")));
}

HPolytope hpolytope_from_json(Json const& j) {
    return HPolytope(mat_from_json(field(j, "A")), vec_from_json(field(j, "b")));
}

Zonotope zonotope_from_json(Json const& j) {
    Vec center = vec_from_json(field(j, "center"));
    Json const& g = field(j, "generators");
    if (g.empty() || g[0].empty()) return Zonotope(center, Mat(center.size(), 0));
    return Zonotope(std::move(center), mat_from_json(g));
}

ConstraintSet set_from_json(Json const& j) {
    auto const type = field(j, "type").get<std::string>();
    if (type == "interval") return interval_from_json(j);
    if (type == "hpolytope") return hpolytope_from_json(j);
    if (type == "zonotope") return zonotope_from_json(j);
    if (type == "union") {
        std::vector<Interval> members;
        for (auto const& m : field(j, "members")) members.push_back(interval_from_json(m));
        return IntervalUnion(std::move(members));
    }
    throw ArgumentError("serialization: unknown set type '" + type + "'");
}

Json read_json_file(std::string const& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (Json::parse_error const& e) {
        throw ArgumentError(path + ": " + e.what());
    }
}

}  // namespace truncpol
