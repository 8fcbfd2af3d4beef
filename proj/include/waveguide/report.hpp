#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "waveguide/assumptions.hpp"
#include "waveguide/bound_states.hpp"
#include "waveguide/cross_section.hpp"
#include "waveguide/mourre.hpp"

namespace wg {

struct SpectralReport {
    std::string command;
    std::string verdict;  // PASS | FAIL | GATED | ERROR
    std::string config;   // canonical config text
    std::optional<ThresholdSet> thresholds;
    std::vector<BoundStateReport> spectra;  // one per recipe
    std::vector<MourreResult> mourre;
    std::vector<AssumptionReport> assumptions;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> messages;
    std::string timestamp;  // the only field allowed to differ between identical runs
};

inline constexpr const char* config_begin_marker = "# --- begin config ---";
inline constexpr const char* config_end_marker = "# --- end config ---";

void write_report(std::ostream& out, const SpectralReport& report);

// The config block embedded by write_report, markers stripped.
std::string extract_embedded_config(const std::string& report_text);

// recipe,level,L,ds,du,index,value plus one extrapolated row per candidate.
void write_spectrum_csv(std::ostream& out, const std::vector<BoundStateReport>& spectra);

// lambda,epsilon,rho,expected,measured,eigenpairs,filtered,verdict
void write_mourre_csv(std::ostream& out, const std::vector<MourreResult>& rows);

// True when every reported bound state lies below ν₁ by more than its error bar.
bool report_sound(const BoundStateReport& r);

} // namespace wg
