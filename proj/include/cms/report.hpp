#pragma once

// Verification report: per-check residual statistics over a grid sweep, and
// a deterministic JSON writer (fixed key order, every float printed with 17
// significant digits) so byte-identical configs give byte-identical reports.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "cms/expr.hpp"

namespace cms {

using Json = nlohmann::ordered_json;

struct CheckStats {
    std::string name;
    double tolerance = 0.0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    long points_checked = 0;
    Point3 witness_of_max{};
    bool pass = false;
    bool skipped = false;
    std::string skip_reason;
};

struct SkippedPoint {
    Point3 point;
    std::string reason;
};

struct VerificationReport {
    std::vector<CheckStats> checks;
    bool overall_pass = false;
    std::string branch;
    std::string branch_rationale;
    std::string zeta_provenance;
    std::string det_b_sign;
    long grid_points_total = 0;
    long grid_points_checked = 0;
    std::vector<SkippedPoint> skipped_points;
    std::vector<std::string> notes;

    const CheckStats* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// Residual series over the sweep: one value slot per grid point per check,
// merged serially in point order so means are scheduling-independent.
class SweepSeries {
public:
    explicit SweepSeries(std::size_t n_points) : n_points_(n_points) {}

    int add(std::string name, double tolerance) {
        CheckStats s;
        s.name = std::move(name);
        s.tolerance = tolerance;
        stats_.push_back(std::move(s));
        values_.emplace_back(n_points_, std::numeric_limits<double>::quiet_NaN());
        return static_cast<int>(stats_.size()) - 1;
    }

    int add_skipped(std::string name, double tolerance, std::string reason) {
        int id = add(std::move(name), tolerance);
        stats_[id].skipped = true;
        stats_[id].skip_reason = std::move(reason);
        return id;
    }

    void set(int check, std::size_t point, double value) { values_[check][point] = value; }

    std::vector<CheckStats> finalize(const std::vector<Point3>& points) {
        for (std::size_t c = 0; c < stats_.size(); ++c) {
            CheckStats& s = stats_[c];
            if (s.skipped) {
                s.pass = true;
                continue;
            }
            double sum = 0.0;
            for (std::size_t i = 0; i < n_points_; ++i) {
                double v = values_[c][i];
                if (std::isnan(v)) continue;
                double a = std::abs(v);
                if (s.points_checked == 0 || a > s.max_residual) {
                    s.max_residual = a;
                    s.witness_of_max = points[i];
                }
                sum += a;
                ++s.points_checked;
            }
            s.mean_residual = s.points_checked ? sum / s.points_checked : 0.0;
            s.pass = s.max_residual <= s.tolerance;
        }
        return stats_;
    }

private:
    std::size_t n_points_;
    std::vector<CheckStats> stats_;
    std::vector<std::vector<double>> values_;
};

namespace detail {

inline void write_json_value(const Json& j, std::string& out, int depth) {
    auto indent = [&](int d) { out.append(static_cast<std::size_t>(d) * 2, ' '); };
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            std::size_t i = 0;
            for (auto it = j.begin(); it != j.end(); ++it, ++i) {
                indent(depth + 1);
                out += Json(it.key()).dump();
                out += ": ";
                write_json_value(it.value(), out, depth + 1);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            indent(depth);
            out += '}';
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            bool scalars_only = true;
            for (const auto& v : j)
                if (v.is_structured()) scalars_only = false;
            if (scalars_only) {
                out += '[';
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i) out += ", ";
                    write_json_value(j[i], out, depth);
                }
                out += ']';
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                indent(depth + 1);
                write_json_value(j[i], out, depth + 1);
                if (i + 1 < j.size()) out += ',';
                out += '\n';
            }
            indent(depth);
            out += ']';
            return;
        }
        case Json::value_t::number_float:
            out += ScalarField::format_double(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

}  // namespace detail

// Deterministic serialization: insertion-ordered keys, 2-space indent,
// doubles via %.17g.
inline std::string serialize_json(const Json& j) {
    std::string out;
    detail::write_json_value(j, out, 0);
    out += '\n';
    return out;
}

inline Json point_json(const Point3& p) {
    return Json::array({p.x1, p.x2, p.x3});
}

inline Json report_json(const VerificationReport& rep) {
    Json j;
    j["kind"] = "verification_report";
    j["overall_pass"] = rep.overall_pass;
    j["branch"] = rep.branch;
    j["branch_rationale"] = rep.branch_rationale;
    j["zeta_provenance"] = rep.zeta_provenance;
    j["det_b_sign"] = rep.det_b_sign;
    Json grid;
    grid["total_points"] = rep.grid_points_total;
    grid["checked_points"] = rep.grid_points_checked;
    Json skipped = Json::array();
    for (const auto& sp : rep.skipped_points) {
        Json e;
        e["point"] = point_json(sp.point);
        e["reason"] = sp.reason;
        skipped.push_back(std::move(e));
    }
    grid["skipped_points"] = std::move(skipped);
    j["grid"] = std::move(grid);

    Json checks = Json::array();
    for (const auto& c : rep.checks) {
        Json e;
        e["name"] = c.name;
        if (c.skipped) {
            e["skipped"] = true;
            e["reason"] = c.skip_reason;
            checks.push_back(std::move(e));
            continue;
        }
        e["tolerance"] = c.tolerance;
        e["max_residual"] = c.max_residual;
        e["mean_residual"] = c.mean_residual;
        e["points_checked"] = c.points_checked;
        e["witness_of_max"] = point_json(c.witness_of_max);
        e["pass"] = c.pass;
        checks.push_back(std::move(e));
    }
    j["checks"] = std::move(checks);
    j["notes"] = rep.notes;
    return j;
}

}  // namespace cms
