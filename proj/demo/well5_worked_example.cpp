// Reproduces the Well-5 comparison table from fixed parameters, then fits
// the synthetic history and compares the three models on it.
//
// usage: well5_worked_example [history.csv]

#include <cstdio>
#include <iostream>

#include "dca/dca.hpp"

namespace {

void print_table(const dca::AnalysisReport& report) {
    std::printf("%-12s %10s %10s %10s %12s %10s %12s\n", "model", "qi", "Di", "b", "Qf", "dt_days", "EUR");
    for (const auto& e : report.entries) {
        if (!e.ok()) {
            std::printf("%-12s fit failed: %s\n", std::string(to_string(e.kind)).c_str(), e.diagnostic.c_str());
            continue;
        }
        const auto& f = *e.projection;
        std::printf("%-12s %10.4f %10.6f %10.3g %12.2f %10.1f %12.2f\n", std::string(to_string(e.kind)).c_str(),
                    e.params->qi, e.params->di, e.params->b, f.qf, f.delta_t, f.eur.value_or(NAN));
    }
    std::printf("selected: %s (%s)\n\n", std::string(to_string(report.selected_model)).c_str(),
                report.selection_reason.c_str());
}

} // namespace

int main(int argc, char** argv) {
    using namespace dca;

    const double np = 10941.9205;
    const ForecastSpec spec{2.6755, kDefaultAbandonmentRate, 1.0};

    const DeclineParameters published[] = {DeclineParameters::exponential(11.339, 0.0134),
                                           DeclineParameters::harmonic(19.69, 0.0039),
                                           DeclineParameters::hyperbolic(2.6755, 0.0039, 2e-5)};
    std::printf("Well 5, fixed parameters (q from 2.6755 to 0.03 mmscf/d, Np %.4f mmscf)\n", np);
    print_table(tabulate(published, spec, np));

    const char* path = argc > 1 ? argv[1] : DCA_DEMO_DATA;
    try {
        const WellInput well = parse_history_file(path);
        AnalysisReport report = compare_models(well.history, spec, kAllDeclineKinds);
        report.well_id = well.well_id;
        std::printf("%s, fitted to %zu records\n", well.well_id.c_str(), well.history.size());
        print_table(report);
        for (const auto& e : report.entries)
            if (e.fit && e.fit->r_squared)
                std::printf("%-12s R^2 %.4f  RMSE %.4f mmscf/d\n", std::string(to_string(e.kind)).c_str(),
                            *e.fit->r_squared, e.fit->rmse);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
