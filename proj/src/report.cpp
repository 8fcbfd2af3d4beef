#include "waveguide/report.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "waveguide/errors.hpp"

namespace wg {

namespace {

std::string num(double v)
{
    std::ostringstream o;
    o.precision(12);
    o << v;
    return o.str();
}

void write_spectrum(std::ostream& out, const BoundStateReport& r)
{
    out << "[[spectrum]]\n";
    out << "recipe = " << to_string(r.recipe) << '\n';
    out << "nu1 = " << num(r.nu1) << '\n';
    out << "L = " << num(r.L) << '\n';
    out << "truncation_error = " << num(r.truncation_error) << '\n';
    out << "truncation_converged = " << (r.truncation_converged ? "true" : "false") << '\n';
    out << "count_below_threshold = " << r.count_previous << ", " << r.count_last << '\n';
    out << "count_stable = " << (r.count_stable() ? "true" : "false") << '\n';
    const auto found = r.bound_states();
    out << "bound_states = " << found.size() << '\n';
    if (found.empty()) out << "status = no bound state detected\n";
    for (const auto& l : r.L_ladder) {
        out << "[[spectrum.L_level]]\n";
        out << "L = " << num(l.L) << "\nds = " << num(l.ds) << "\nunknowns = " << l.unknowns << '\n';
        out << "lowest = " << num(l.values.front()) << '\n';
    }
    for (const auto& l : r.ladder) {
        out << "[[spectrum.level]]\n";
        out << "L = " << num(l.L) << "\nds = " << num(l.ds) << "\ndu = " << num(l.du) << '\n';
        out << "unknowns = " << l.unknowns << "\nmethod = " << l.method << '\n';
        out << "threshold_h = " << num(l.threshold_h) << "\nbelow_threshold = " << l.below_threshold << '\n';
        out << "values = ";
        for (std::size_t j = 0; j < l.values.size(); ++j) out << (j ? ", " : "") << num(l.values[j]);
        out << "\nmax_residual = " << num(l.max_residual) << '\n';
    }
    for (const auto& b : r.candidates) {
        out << "[[spectrum.candidate]]\n";
        out << "index = " << b.index << '\n';
        out << "ladder = ";
        for (std::size_t j = 0; j < b.ladder.size(); ++j) out << (j ? ", " : "") << num(b.ladder[j]);
        out << "\nextrapolated = " << num(b.extrapolated) << '\n';
        out << "error = " << num(b.error) << '\n';
        out << "observed_order = " << (std::isnan(b.observed_order) ? std::string("n/a") : num(b.observed_order)) << '\n';
        out << "order_flag = " << (b.order_flag ? "true" : "false") << '\n';
        out << "below_threshold = " << (b.separated ? "true" : "false") << '\n';
    }
}

} // namespace

bool report_sound(const BoundStateReport& r)
{
    for (const auto& b : r.bound_states())
        if (!(b.extrapolated < r.nu1 - b.error)) return false;
    return true;
}

void write_report(std::ostream& out, const SpectralReport& r)
{
    out << "[report]\n";
    out << "command = " << r.command << '\n';
    out << "verdict = " << r.verdict << '\n';
    out << "timestamp = " << r.timestamp << '\n';
    for (const auto& [k, v] : r.metadata) out << k << " = " << v << '\n';
    for (const auto& m : r.messages) out << "message = " << m << '\n';
    if (r.thresholds) {
        out << "[thresholds]\n";
        out << "nu1 = " << num(r.thresholds->nu1()) << '\n';
        out << "values = ";
        for (std::size_t i = 0; i < r.thresholds->nu.size(); ++i) out << (i ? ", " : "") << num(r.thresholds->nu[i]);
        out << "\nexactness = ";
        for (std::size_t i = 0; i < r.thresholds->exactness.size(); ++i)
            out << (i ? ", " : "") << (r.thresholds->exactness[i] == Exactness::analytic ? "analytic" : "discretized");
        out << "\nessential_spectrum = [" << num(r.thresholds->nu1()) << ", inf)\n";
    }
    for (const auto& s : r.spectra) write_spectrum(out, s);
    for (const auto& m : r.mourre) {
        out << "[[mourre]]\n";
        out << "lambda = " << num(m.lambda) << "\nepsilon = " << num(m.epsilon) << "\nrho = " << num(m.rho) << '\n';
        out << "expected = " << num(m.expected) << "\nmeasured = " << num(m.measured) << '\n';
        out << "eigenpairs = " << m.eigenpairs << "\nfiltered = " << m.filtered << '\n';
        out << "verdict = " << (m.pass ? "PASS" : "FAIL") << '\n';
    }
    for (const auto& a : r.assumptions) write_assumption_report(out, a);
    out << config_begin_marker << '\n' << r.config;
    if (!r.config.empty() && r.config.back() != '\n') out << '\n';
    out << config_end_marker << '\n';
}

std::string extract_embedded_config(const std::string& text)
{
    const std::string b = std::string(config_begin_marker) + "\n";
    const auto start = text.find(b);
    const auto stop = text.find(config_end_marker);
    if (start == std::string::npos || stop == std::string::npos || stop < start)
        throw InputError("report does not embed a config block");
    return text.substr(start + b.size(), stop - start - b.size());
}

void write_spectrum_csv(std::ostream& out, const std::vector<BoundStateReport>& spectra)
{
    out << "recipe,kind,L,ds,du,index,value,error\n";
    for (const auto& r : spectra) {
        for (const auto& l : r.ladder)
            for (std::size_t j = 0; j < l.values.size(); ++j)
                out << to_string(r.recipe) << ",level," << num(l.L) << ',' << num(l.ds) << ',' << num(l.du) << ',' << j << ','
                    << num(l.values[j]) << ",\n";
        for (const auto& b : r.candidates)
            out << to_string(r.recipe) << ",extrapolated," << num(r.L) << ",,," << b.index << ',' << num(b.extrapolated) << ','
                << num(b.error) << '\n';
    }
}

void write_mourre_csv(std::ostream& out, const std::vector<MourreResult>& rows)
{
    out << "lambda,epsilon,rho,expected,measured,eigenpairs,filtered,verdict\n";
    for (const auto& m : rows)
        out << num(m.lambda) << ',' << num(m.epsilon) << ',' << num(m.rho) << ',' << num(m.expected) << ',' << num(m.measured) << ','
            << m.eigenpairs << ',' << m.filtered << ',' << (m.pass ? "PASS" : "FAIL") << '\n';
}

} // namespace wg
