// SPDX-License-Identifier: Apache-2.0
#include "carbonledger/fleet.hpp"

#include <cmath>

#include "carbonledger/error.hpp"

namespace carbonledger {

FleetSnapshot& FleetSnapshot::operator+=(const FleetSnapshot& other)
{
    total_energy_twh += other.total_energy_twh;
    accelerator_training_twh += other.accelerator_training_twh;
    accelerator_inference_twh += other.accelerator_inference_twh;
    cpu_inference_twh += other.cpu_inference_twh;
    return *this;
}

namespace {

void require_nonnegative(double value, const char* name)
{
    if (!std::isfinite(value) || value < 0.0) {
        throw ValidationError(std::string(name) + " must be a finite value >= 0");
    }
}

}  // namespace

FleetReport fleet_report(const FleetSnapshot& snapshot)
{
    require_nonnegative(snapshot.total_energy_twh, "total_energy_twh");
    require_nonnegative(snapshot.accelerator_training_twh, "accelerator_training_twh");
    require_nonnegative(snapshot.accelerator_inference_twh, "accelerator_inference_twh");
    require_nonnegative(snapshot.cpu_inference_twh, "cpu_inference_twh");
    if (snapshot.total_energy_twh == 0.0) {
        throw ValidationError("total_energy_twh must be > 0");
    }

    FleetReport report;
    report.period_label = snapshot.period_label;
    const double inference = snapshot.accelerator_inference_twh + snapshot.cpu_inference_twh;
    report.ml_total_twh = snapshot.accelerator_training_twh + inference;
    if (report.ml_total_twh > snapshot.total_energy_twh * (1.0 + 1e-12)) {
        throw ValidationError("ML components sum to more than total_energy_twh");
    }
    report.ml_fraction = report.ml_total_twh / snapshot.total_energy_twh;
    if (report.ml_total_twh > 0.0) {
        report.training_share = snapshot.accelerator_training_twh / report.ml_total_twh;
        report.inference_share = inference / report.ml_total_twh;
    }
    return report;
}

MobileBoundReport mobile_bound(double phones, double global_phone_twh, double ml_share_bound, double server_ml_twh)
{
    require_nonnegative(phones, "phones");
    require_nonnegative(global_phone_twh, "global_phone_twh");
    require_nonnegative(ml_share_bound, "ml_share_bound");
    require_nonnegative(server_ml_twh, "server_ml_twh");
    if (ml_share_bound > 1.0) {
        throw ValidationError("ml_share_bound must be <= 1");
    }

    MobileBoundReport report;
    report.phones = phones;
    report.global_phone_twh = global_phone_twh;
    report.ml_share_bound = ml_share_bound;
    report.server_ml_twh = server_ml_twh;
    report.client_ml_bound_twh = global_phone_twh * ml_share_bound;
    if (report.client_ml_bound_twh > 0.0) {
        report.server_to_client_ratio = server_ml_twh / report.client_ml_bound_twh;
    }
    return report;
}

}  // namespace carbonledger
