// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

namespace carbonledger {

/// Energy measured over one reporting period, including datacenter overheads.
struct FleetSnapshot {
    std::string period_label;
    double total_energy_twh = 0.0;
    double accelerator_training_twh = 0.0;
    double accelerator_inference_twh = 0.0;
    double cpu_inference_twh = 0.0;

    FleetSnapshot& operator+=(const FleetSnapshot& other);
};

struct FleetReport {
    std::string period_label;
    double ml_total_twh = 0.0;
    double ml_fraction = 0.0;      // of total energy
    double training_share = 0.0;   // of ML energy
    double inference_share = 0.0;  // of ML energy
};

/// Throws ValidationError when total energy is zero, any field is negative,
/// or the ML components exceed the total.
FleetReport fleet_report(const FleetSnapshot& snapshot);

struct MobileBoundReport {
    double phones = 0.0;
    double global_phone_twh = 0.0;
    double ml_share_bound = 0.0;
    double client_ml_bound_twh = 0.0;
    double server_ml_twh = 0.0;
    std::optional<double> server_to_client_ratio;  // absent when the client bound is 0
};

/// Upper bound on client-side ML energy and how server ML energy compares.
MobileBoundReport mobile_bound(double phones, double global_phone_twh, double ml_share_bound, double server_ml_twh);

}  // namespace carbonledger
