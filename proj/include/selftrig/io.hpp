#pragma once

#include "selftrig/simulator.hpp"

#include <string>
#include <vector>

namespace selftrig {

// All numeric CSV/JSON output uses 17 significant digits so values round-trip
// through text exactly.
std::string format_double(double v);

void write_trace_csv(const std::string& path, const Trace& trace);
void write_events_csv(const std::string& path, const std::vector<EventRecord>& events);
void write_summary_json(const std::string& path, const Summary& summary);

// Reads a trace.csv produced by write_trace_csv (round-trip support).
Trace read_trace_csv(const std::string& path);

} // namespace selftrig
