#pragma once

#include <string>

#include "stablediff/local_time.hpp"
#include "stablediff/pathsim.hpp"

namespace stablediff {

// CSV: a "# {json}" metadata line, header "path,t=...", one row per path (%.17g).
void write_sample_csv(const FunctionalSample& s, const std::string& path);
FunctionalSample read_sample_csv(const std::string& path);

// Binary: "SDFSAMP1", u32 metadata length, metadata JSON, u64 paths, u64 times,
// the times, then row-major values; all little-endian.
void write_sample_binary(const FunctionalSample& s, const std::string& path);
FunctionalSample read_sample_binary(const std::string& path);

// Picks the format from the extension (.bin → binary, otherwise CSV).
void write_sample(const FunctionalSample& s, const std::string& path);
FunctionalSample read_sample(const std::string& path);

// Wraps excursion or CMS reference draws in the common sample format.
FunctionalSample sample_from_excursions(const ExcursionSample& e, const std::string& label, std::uint64_t seed,
                                        double dt);
FunctionalSample sample_from_values(const std::vector<double>& values, double t, const std::string& scheme,
                                    std::uint64_t seed);

}  // namespace stablediff
