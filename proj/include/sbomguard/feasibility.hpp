// Copyright sbomguard contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace sbomguard::feasibility {

struct FeasibilityInputs {
    double developers = 0;
    double repositories = 0;
    double avg_versions_per_library = 0;
    double identity_record_bytes = 296;  // identity repository row total
    double library_record_bytes = 208;   // library repository row total
    double per_identity_check_ms = 0;
    double per_library_check_ms = 0;
    double deps_per_app = 0;
};

struct StorageEstimate {
    double identity_gib = 0;
    double library_gib = 0;
};

/// Full-node storage: one identity record per developer, one library record
/// per (repository, version). The arithmetic only works out in base-1024
/// units, so results are labeled GiB.
StorageEstimate estimate_storage(const FeasibilityInputs& inputs);

/// Seconds to check every dependency of one application against both chains.
double estimate_verification_time(const FeasibilityInputs& inputs);

struct RegistrationLatency {
    std::uint64_t minutes = 40;   // median block confirmation time modeled
    std::uint64_t seconds = 2400;
    std::uint64_t milliseconds = 2'400'000;
};

RegistrationLatency registration_latency_note();

}  // namespace sbomguard::feasibility
