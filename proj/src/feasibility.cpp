// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#include "sbomguard/feasibility.hpp"

namespace sbomguard::feasibility {

namespace {
constexpr double kGiB = 1024.0 * 1024.0 * 1024.0;
}

StorageEstimate estimate_storage(const FeasibilityInputs& inputs) {
    StorageEstimate estimate;
    estimate.identity_gib = inputs.developers * inputs.identity_record_bytes / kGiB;
    estimate.library_gib =
        inputs.repositories * inputs.avg_versions_per_library * inputs.library_record_bytes / kGiB;
    return estimate;
}

double estimate_verification_time(const FeasibilityInputs& inputs) {
    return inputs.deps_per_app * (inputs.per_identity_check_ms + inputs.per_library_check_ms) /
           1000.0;
}

RegistrationLatency registration_latency_note() { return {}; }

}  // namespace sbomguard::feasibility
