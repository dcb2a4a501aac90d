#ifndef MCONE_UNIVERSAL_HPP
#define MCONE_UNIVERSAL_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "mcone/distance_matrix.hpp"
#include "mcone/polytope.hpp"
#include "mcone/rng.hpp"

namespace mcone {

/// Revisit schedule m_1, m_2, ... with m_k <= k and every value recurring
/// unboundedly. The default is the diagonal enumeration 1; 1,2; 1,2,3; ...
struct ScheduleSpec {
    enum class Kind { Diagonal };
    Kind kind = Kind::Diagonal;
};

/// m-value of the diagonal schedule at 1-based position `step`.
int diagonal_schedule_value(int step);

/// Exact number of occurrences of `v` among the first `n` schedule entries.
int diagonal_schedule_count(int v, int n);

struct BuildStepLog {
    int step;           // 1-based step index
    int m;              // schedule value: order targeted at this step
    int visit_index;    // how many times this order has been targeted (1-based)
    double target_gap;  // sup-norm distance of the projection from the dense point
    double bound;       // the 2^-step requirement, floored at 1e-9
};

/// Grows a distance-matrix prefix whose column prefixes become dense in
/// every admissible set, following the revisit schedule: at each step the
/// appended row projects onto the scheduled order within 2^-step of the
/// next point of that order's dense stream, and is completed to a full
/// interior row through amalgamation-interval midpoints.
class UniversalBuilder {
  public:
    UniversalBuilder(std::uint64_t seed, ScheduleSpec schedule = {},
                     std::optional<double> diameter = std::nullopt,
                     double tolerance = DistanceMatrix::kDefaultTolerance);
    ~UniversalBuilder();
    UniversalBuilder(UniversalBuilder&&) noexcept;
    UniversalBuilder& operator=(UniversalBuilder&&) noexcept;

    void step();
    void run(int steps);

    const DistanceMatrix& current() const { return current_; }
    const std::vector<BuildStepLog>& log() const { return log_; }

  private:
    std::vector<double> next_dense_point(int k);

    struct DenseStream;

    DistanceMatrix current_;
    ScheduleSpec schedule_;
    std::optional<double> diameter_;
    Rng root_;
    int steps_done_ = 0;
    std::map<int, int> visits_;
    std::map<int, std::unique_ptr<DenseStream>> streams_;
    std::vector<BuildStepLog> log_;
};

/// Runs the builder for `steps` extensions; the result has order steps + 1.
DistanceMatrix build_universal(int steps, std::uint64_t seed, ScheduleSpec schedule = {},
                               std::optional<double> diameter = std::nullopt);

struct UniversalityReport {
    int order_tested = 0;      // n: the admissible sets A(p_n(r)) being probed
    double epsilon = 0;
    int targets_tested = 0;
    double worst_defect = 0;   // max over targets of min over columns of the sup gap
    bool passed = false;
};

/// Samples admissible vectors for the order-n corner and measures how well
/// the later column prefixes of r approximate each of them.
UniversalityReport universality_test(const DistanceMatrix& r, int n, double epsilon,
                                     int targets, std::uint64_t seed);

/// Searches for indices i_1 < ... < i_k whose submatrix is sup-norm close
/// to q, by sequential column matching with backtracking. Orders above 6
/// raise CapabilityError.
std::optional<std::vector<int>> weak_universality_test(const DistanceMatrix& r,
                                                       const DistanceMatrix& q,
                                                       double epsilon);

/// First k coordinates of an admissible vector; the projection onto the
/// admissible set of the corresponding corner.
std::vector<double> chi_projection(std::span<const double> a, int k);

} // namespace mcone

#endif
