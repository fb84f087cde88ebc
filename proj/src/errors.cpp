#include "icrt/errors.hpp"

namespace icrt {

const char* errc_name(errc c) {
    switch (c) {
        case errc::negative_beta: return "NegativeBeta";
        case errc::unsorted_theta: return "UnsortedTheta";
        case errc::nonpositive_theta_entry: return "NonpositiveThetaEntry";
        case errc::brownianless_zero_beta: return "BrownianlessZeroBeta";
        case errc::negative_t: return "NegativeT";
        case errc::negative_x: return "NegativeX";
        case errc::nonpositive_eps: return "NonpositiveEps";
        case errc::size_mismatch: return "SizeMismatch";
        case errc::n_too_large: return "NTooLarge";
        case errc::inconsistent_inputs: return "InconsistentInputs";
        case errc::same_vertex: return "SameVertex";
        case errc::incomplete_traces: return "IncompleteTraces";
        case errc::result_not_a_tree: return "ResultNotATree";
        case errc::time_collision: return "TimeCollision";
        case errc::k_zero: return "KZero";
        case errc::empty_intensity: return "EmptyIntensity";
        case errc::unknown_hub: return "UnknownHub";
        case errc::absent_hub: return "AbsentHub";
        case errc::too_few_leaves: return "TooFewLeaves";
        case errc::gamma_zero: return "GammaZero";
        case errc::m_too_large: return "MTooLarge";
        case errc::empty_skeleton: return "EmptySkeleton";
        case errc::untracked_leaf: return "UntrackedLeaf";
        case errc::incomplete_history: return "IncompleteHistory";
        case errc::no_hub_cuts: return "NoHubCuts";
        case errc::unresolved_address: return "UnresolvedAddress";
        case errc::zero_beta: return "ZeroBeta";
        case errc::node_not_internal: return "NodeNotInternal";
        case errc::length_mismatch: return "LengthMismatch";
        case errc::degenerate_cells: return "DegenerateCells";
        case errc::too_few_samples: return "TooFewSamples";
        case errc::unknown_suite: return "UnknownSuite";
        case errc::bad_config: return "BadConfig";
        case errc::unknown_format: return "UnknownFormat";
        case errc::parse_error: return "ParseError";
    }
    return "UnknownError";
}

} // namespace icrt
