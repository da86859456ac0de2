#pragma once

#include "dyadic/integrator.hpp"
#include "dyadic/selfsimilar.hpp"
#include "dyadic/series.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace dyadic {

inline constexpr int kSchemaVersion = 1;

// 17 significant digits: enough to round-trip any double exactly.
std::string format_sig(double v);

// Writes to a sibling temp file and renames over the target, creating parent
// directories as needed, so readers never observe a partial file.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

// Header `t,X1,...,XN,energy`, one row per sample.
std::string trace_csv(const Trace& trace);

// Header `k,d,d_prime,D`, rows k = 0..terms.
std::string series_csv(const SeriesTable& table);

// Header `n,a_n`, rows n = 1..N.
std::string profile_csv(const SelfSimilarProfile& prof);

nlohmann::ordered_json radius_json(const RadiusReport& rep);

}  // namespace dyadic
