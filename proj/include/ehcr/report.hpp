#ifndef EHCR_REPORT_HPP
#define EHCR_REPORT_HPP

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ehcr/analysis.hpp"
#include "ehcr/config.hpp"
#include "ehcr/sim.hpp"

namespace ehcr {

struct Verdict {
    std::string suite;
    bool pass = false;
    std::string detail;

    friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct ReportRow {
    double tau = 0.0;
    MetricPoint analytic;
    std::optional<SimEstimate> sim;

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct RunReport {
    SystemConfig config;
    std::vector<ReportRow> rows;
    std::vector<Verdict> validation;
    double wall_seconds = 0.0;
};

namespace report {

inline constexpr std::string_view csv_header = "tau,d_star,phi1,phi2,p_tr,f_snr,p_out,throughput";
inline constexpr std::string_view csv_sim_header = "p_tr_mc,p_out_mc,thr_mc,ci99_ptr,ci99_pout";

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17e", v);
    return buf;
}

/// CSV with one row per tau; simulation columns appear when every row carries an estimate.
inline std::string to_csv(const RunReport& r) {
    const bool with_sim = !r.rows.empty() && std::all_of(r.rows.begin(), r.rows.end(),
                                                         [](const ReportRow& row) { return row.sim.has_value(); });
    std::string out(csv_header);
    if (with_sim) {
        out += ',';
        out += csv_sim_header;
    }
    out += '\n';
    for (const auto& row : r.rows) {
        const MetricPoint& a = row.analytic;
        bool first = true;
        for (const double v : {row.tau, a.d_star, a.phi1, a.phi2, a.p_tr, a.f_snr, a.p_out, a.throughput}) {
            if (!first) out += ',';
            first = false;
            out += format_double(v);
        }
        if (with_sim) {
            const SimEstimate& s = *row.sim;
            for (const double v : {s.p_tr_hat, s.p_out_hat, s.throughput_hat, s.ci99_ptr, s.ci99_pout}) {
                out += ',';
                out += format_double(v);
            }
        }
        out += '\n';
    }
    return out;
}

/// Inverse of to_csv for the columns the CSV carries.
inline std::vector<ReportRow> parse_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("parse_csv: empty input");
    }
    const std::string full_header = std::string(csv_header) + "," + std::string(csv_sim_header);
    bool with_sim = false;
    if (line == full_header) {
        with_sim = true;
    } else if (line != csv_header) {
        throw std::runtime_error("parse_csv: unexpected header '" + line + "'");
    }
    const std::size_t columns = with_sim ? 13 : 8;
    std::vector<ReportRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> v;
        std::istringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            // strtod rather than stod: subnormal values must parse, not throw.
            char* end = nullptr;
            v.push_back(std::strtod(cell.c_str(), &end));
            if (cell.empty() || end != cell.c_str() + cell.size()) {
                throw std::runtime_error("parse_csv: bad number '" + cell + "'");
            }
        }
        if (v.size() != columns) {
            throw std::runtime_error("parse_csv: expected " + std::to_string(columns) + " columns");
        }
        ReportRow row;
        row.tau = v[0];
        row.analytic = {v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
        if (with_sim) {
            SimEstimate s;
            s.p_tr_hat = v[8];
            s.p_out_hat = v[9];
            s.throughput_hat = v[10];
            s.ci99_ptr = v[11];
            s.ci99_pout = v[12];
            row.sim = s;
        }
        rows.push_back(row);
    }
    return rows;
}

inline nlohmann::json config_to_json(const SystemConfig& c) {
    auto link = [](const FadingParams& p) { return nlohmann::json{{"K", p.K()}, {"mu", p.mu()}, {"m", p.m()}}; };
    return {
        {"P_b_w", c.P_b},     {"M_w", c.M},         {"eta", c.eta},         {"tau", c.tau},
        {"T_s", c.T},         {"N0_w", c.N0},       {"R", c.R},             {"alpha", c.alpha},
        {"alpha_s", c.alpha_s}, {"d_min", c.d_min}, {"d_max", c.d_max},     {"d_STSR", c.d_STSR},
        {"rho", c.rho},       {"P_c_w", c.P_c},     {"ideal", c.ideal},     {"fading_pb_st", link(c.fading_pb_st)},
        {"fading_st_sr", link(c.fading_st_sr)},
    };
}

inline SystemConfig config_from_json(const nlohmann::json& j) {
    SystemConfig c;
    c.P_b = j.at("P_b_w").get<double>();
    c.M = j.at("M_w").get<double>();
    c.eta = j.at("eta").get<double>();
    c.tau = j.at("tau").get<double>();
    c.T = j.at("T_s").get<double>();
    c.N0 = j.at("N0_w").get<double>();
    c.R = j.at("R").get<double>();
    c.alpha = j.at("alpha").get<double>();
    c.alpha_s = j.at("alpha_s").get<double>();
    c.d_min = j.at("d_min").get<double>();
    c.d_max = j.at("d_max").get<double>();
    c.d_STSR = j.at("d_STSR").get<double>();
    c.rho = j.at("rho").get<double>();
    c.P_c = j.at("P_c_w").get<double>();
    c.ideal = j.at("ideal").get<bool>();
    auto link = [](const nlohmann::json& l) {
        return FadingParams(l.at("K").get<double>(), l.at("mu").get<int>(), l.at("m").get<int>());
    };
    c.fading_pb_st = link(j.at("fading_pb_st"));
    c.fading_st_sr = link(j.at("fading_st_sr"));
    return c;
}

inline nlohmann::json to_json(const RunReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        const MetricPoint& a = row.analytic;
        nlohmann::json jr = {
            {"tau", row.tau},   {"d_star", a.d_star}, {"phi1", a.phi1},   {"phi2", a.phi2},
            {"p_tr", a.p_tr},   {"f_snr", a.f_snr},   {"p_out", a.p_out}, {"throughput", a.throughput},
        };
        if (row.sim) {
            const SimEstimate& s = *row.sim;
            jr["sim"] = {
                {"p_tr_hat", s.p_tr_hat},
                {"p_out_hat", s.p_out_hat},
                {"throughput_hat", s.throughput_hat},
                {"ci99_ptr", s.ci99_ptr},
                {"ci99_pout", s.ci99_pout},
                {"ci99_throughput", s.ci99_throughput},
                {"multi_slot_share", s.multi_slot_share},
                {"n_slots", s.n_slots},
                {"n_placements", s.n_placements},
                {"seed", s.seed},
            };
        }
        rows.push_back(std::move(jr));
    }
    nlohmann::json validation = nlohmann::json::array();
    for (const auto& v : r.validation) {
        validation.push_back({{"suite", v.suite}, {"pass", v.pass}, {"detail", v.detail}});
    }
    return {{"config", config_to_json(r.config)},
            {"rows", rows},
            {"validation", validation},
            {"wall_seconds", r.wall_seconds}};
}

inline RunReport from_json(const nlohmann::json& j) {
    RunReport r;
    r.config = config_from_json(j.at("config"));
    for (const auto& jr : j.at("rows")) {
        ReportRow row;
        row.tau = jr.at("tau").get<double>();
        row.analytic = {jr.at("d_star").get<double>(), jr.at("phi1").get<double>(), jr.at("phi2").get<double>(),
                        jr.at("p_tr").get<double>(),   jr.at("f_snr").get<double>(), jr.at("p_out").get<double>(),
                        jr.at("throughput").get<double>()};
        if (jr.contains("sim")) {
            const auto& js = jr.at("sim");
            SimEstimate s;
            s.p_tr_hat = js.at("p_tr_hat").get<double>();
            s.p_out_hat = js.at("p_out_hat").get<double>();
            s.throughput_hat = js.at("throughput_hat").get<double>();
            s.ci99_ptr = js.at("ci99_ptr").get<double>();
            s.ci99_pout = js.at("ci99_pout").get<double>();
            s.ci99_throughput = js.at("ci99_throughput").get<double>();
            s.multi_slot_share = js.at("multi_slot_share").get<double>();
            s.n_slots = js.at("n_slots").get<std::uint64_t>();
            s.n_placements = js.at("n_placements").get<std::uint64_t>();
            s.seed = js.at("seed").get<std::uint64_t>();
            row.sim = s;
        }
        r.rows.push_back(row);
    }
    for (const auto& jv : j.at("validation")) {
        r.validation.push_back(
            {jv.at("suite").get<std::string>(), jv.at("pass").get<bool>(), jv.at("detail").get<std::string>()});
    }
    r.wall_seconds = j.at("wall_seconds").get<double>();
    return r;
}

}  // namespace report
}  // namespace ehcr

#endif  // EHCR_REPORT_HPP
