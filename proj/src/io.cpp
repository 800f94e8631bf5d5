#include "selftrig/io.hpp"
#include "selftrig/errors.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace selftrig {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("io: cannot open " + path + " for writing");
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ','))
        fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, const std::string& path) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error("io: malformed number '" + s + "' in " + path);
    }
    if (pos != s.size())
        throw std::runtime_error("io: malformed number '" + s + "' in " + path);
    return v;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_trace_csv(const std::string& path, const Trace& trace) {
    auto out = open_out(path);
    const Eigen::Index n = trace.x.empty() ? 0 : trace.x.front().size();
    const Eigen::Index m = trace.u.empty() ? 0 : trace.u.front().size();
    out << "t";
    for (Eigen::Index i = 1; i <= n; ++i) out << ",x_" << i;
    for (Eigen::Index i = 1; i <= m; ++i) out << ",u_" << i;
    out << ",V,W,event\n";
    for (std::size_t r = 0; r < trace.t.size(); ++r) {
        out << format_double(trace.t[r]);
        for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(trace.x[r](i));
        for (Eigen::Index i = 0; i < m; ++i) out << ',' << format_double(trace.u[r](i));
        out << ',' << format_double(trace.V[r]) << ',' << format_double(trace.W[r]) << ','
            << int(trace.event[r]) << '\n';
    }
}

void write_events_csv(const std::string& path, const std::vector<EventRecord>& events) {
    auto out = open_out(path);
    out << "k,t_k,t_predicted,inter_event,W_k,runtime_s\n";
    for (const auto& e : events) {
        out << e.k << ',' << format_double(e.t_k) << ',' << format_double(e.t_predicted) << ','
            << format_double(e.inter_event) << ',' << format_double(e.W_k) << ','
            << format_double(e.predictor_runtime) << '\n';
    }
}

void write_summary_json(const std::string& path, const Summary& summary) {
    nlohmann::json j;
    if (summary.settling_time)
        j["settling_time_s"] = *summary.settling_time;
    else
        j["settling_time_s"] = nullptr;
    j["event_count"] = summary.event_count;
    j["lambda_max"] = summary.lambda_max;
    j["min_inter_event_s"] = summary.min_inter_event;
    j["mean_inter_event_s"] = summary.mean_inter_event;
    j["max_inter_event_s"] = summary.max_inter_event;
    j["max_V_over_W"] = summary.max_V_over_W;
    j["runtime_ratio"] = summary.runtime_ratio;
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

Trace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("io: cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("io: " + path + " is empty");
    const auto header = split_csv(line);
    Eigen::Index n = 0, m = 0;
    for (const auto& h : header) {
        if (h.rfind("x_", 0) == 0) ++n;
        if (h.rfind("u_", 0) == 0) ++m;
    }
    if (header.size() != static_cast<std::size_t>(n + m) + 4)
        throw std::runtime_error("io: unexpected trace header in " + path);

    Trace trace;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != header.size())
            throw std::runtime_error("io: ragged row in " + path);
        std::size_t c = 0;
        trace.t.push_back(parse_double(f[c++], path));
        Vector x(n), u(m);
        for (Eigen::Index i = 0; i < n; ++i) x(i) = parse_double(f[c++], path);
        for (Eigen::Index i = 0; i < m; ++i) u(i) = parse_double(f[c++], path);
        trace.x.push_back(std::move(x));
        trace.u.push_back(std::move(u));
        trace.V.push_back(parse_double(f[c++], path));
        trace.W.push_back(parse_double(f[c++], path));
        trace.event.push_back(static_cast<char>(parse_double(f[c++], path) != 0.0));
    }
    return trace;
}

} // namespace selftrig
