#ifndef LPS_CONFIG_HPP
#define LPS_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lps {

/// All pipeline tunables. parse/apply reject unknown keys and
/// out-of-range values, naming the offending key.
struct PipelineConfig {
    double sigma_c2 = 0.1;        // affinity bandwidth
    double drop_frac = 0.3;       // boundary labels dropped as too distinct
    int n_target = 200;           // desired superpixel count
    double slic_compactness = 20;
    double l0_lambda = 0.02;
    double l0_kappa = 2.0;
    double thres = 1e-4;          // propagation stop threshold
    int window = 49;              // variance window ("const")
    int max_iters = 2000;
    int m_windows = 1000;         // objectness sampling windows
    double gamma1 = 0.8;          // objectness label criterion
    double gamma2 = 1.6;          // compactness gate criterion
    bool invert_gate = false;     // flip the gate orientation
    int p1 = 2;
    int p2 = 150;
    double alpha = 1.0;
    double beta = 1.0;
    double k_adaptive = 1.5;
    double beta2 = 0.3;
    double k1 = 0.2;
    double k2 = 0.01;
    std::uint64_t seed = 7;
    int resize_max_dim = 0;       // 0 = keep native size
    bool smoothing = true;        // false = pass-through, no L0 step

    void validate() const;

    /// key=value lines, '#' comments. Later sources win (defaults < file < flags).
    static PipelineConfig from_file(const std::string& path);
    void apply(const std::string& key, const std::string& value);
    void apply_overrides(const std::vector<std::string>& key_value_pairs);

    /// Echo for provenance; round-trips through apply().
    std::map<std::string, std::string> to_map() const;
};

}  // namespace lps

#endif
