#pragma once

#include <stdexcept>
#include <string>

namespace icrt {

// One enumerator per named error condition in the module contracts.
enum class errc {
    // params
    negative_beta,
    unsorted_theta,
    nonpositive_theta_entry,
    brownianless_zero_beta,
    negative_t,
    negative_x,
    nonpositive_eps,
    // ptree / prune / rebuild
    size_mismatch,
    n_too_large,
    inconsistent_inputs,
    same_vertex,
    incomplete_traces,
    result_not_a_tree,
    time_collision,
    // skeleton
    k_zero,
    empty_intensity,
    unknown_hub,
    absent_hub,
    too_few_leaves,
    gamma_zero,
    // frag
    m_too_large,
    empty_skeleton,
    untracked_leaf,
    // cuttree
    incomplete_history,
    no_hub_cuts,
    unresolved_address,
    zero_beta,
    node_not_internal,
    // stats
    length_mismatch,
    degenerate_cells,
    too_few_samples,
    // cli
    unknown_suite,
    bad_config,
    unknown_format,
    parse_error,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
    throw error(code, what);
}

inline void require(bool ok, errc code, const std::string& what) {
    if (!ok) fail(code, what);
}

} // namespace icrt
