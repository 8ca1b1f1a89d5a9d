#pragma once

#include <optional>
#include <string>
#include <vector>

#include "foliage/blueprint.hpp"
#include "foliage/foliage_tree.hpp"
#include "foliage/std_tree.hpp"

namespace foliage {

/// Truncation window for pipeline checks: stratum (depth, width) for shadow
/// assertions, pi-density threshold, and extra root/selector slack for the
/// lazy enumerations.
struct TruncParams {
    std::size_t depth = 4;
    std::size_t width = 4;
    std::size_t threshold = 2;
    std::size_t root_slack = 4;

    std::size_t root_window() const { return depth + root_slack; }
    std::size_t selector_window() const { return depth + width; }
};

enum class Status { pass, fail, undecidable };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        case Status::undecidable: return "undecidable-at-depth";
    }
    return "?";
}

struct CheckRecord {
    std::string id;
    Status status = Status::pass;
    std::string detail;
    std::string witness_json;  // serialized reproduction data for failures
};

struct invariant_failure : std::runtime_error {
    explicit invariant_failure(const std::string& what) : std::runtime_error(what) {}
};

/// State of the Theorem-recursion after stage n: the open sets consumed so
/// far, the blueprints materialized for roots inside the window, and the
/// accumulated loss.  M_n is exposed as a decidable membership predicate.
class PipelineState {
public:
    explicit PipelineState(TruncParams trunc) : trunc_(trunc) {}

    int stage() const { return static_cast<int>(opens_.size()) - 1; }
    const TruncParams& trunc() const { return trunc_; }
    const std::vector<SetExpr>& opens() const { return opens_; }
    const std::vector<GraftBlueprint>& family() const { return family_; }
    const std::vector<std::vector<Seq>>& z_stages() const { return z_stages_; }
    const SetExpr& loss() const { return loss_; }

    /// Intersection of the opens consumed so far (Full when none).
    SetExpr opens_meet() const;

    /// Membership in M_n (n = -1 .. stage()).
    bool in_m(int n, const Seq& y) const;
    /// Membership in Z_n.
    bool in_z(int n, const Seq& y) const;
    /// Does some member of M_n lie strictly below y within the window?
    bool m_below(int n, const Seq& y) const;

    const GraftBlueprint* blueprint_at(const Seq& root) const;

private:
    friend PipelineState pipeline_advance(const PipelineState& state, const SetExpr& u_next);

    TruncParams trunc_;
    std::vector<SetExpr> opens_;
    std::vector<std::vector<Seq>> z_stages_;
    std::vector<GraftBlueprint> family_;
    SetExpr loss_ = SetExpr::empty();
};

/// One recursion step without verification: computes Z = {x in M_prev :
/// classify(u_next, x) = split} inside the root window, builds the
/// blueprints G(x, n) and extends the loss.  Throws invariant_failure if
/// u_next fails the pi-density validation.
PipelineState pipeline_advance(const PipelineState& state, const SetExpr& u_next);

/// pipeline_advance followed by the stage invariants; throws
/// invariant_failure on a definite violation.
PipelineState pipeline_step(const PipelineState& state, const SetExpr& u_next);

/// Runs the recursion on U_n = complement of compacts[n].
PipelineState pipeline_run(const std::vector<CompactCode>& compacts, std::size_t stages,
                           const TruncParams& trunc);

/// The stage invariants, each verified at the declared truncation.
std::vector<CheckRecord> verify_pipeline_invariants(const PipelineState& state);

/// The construction laws of a single blueprint at the declared truncation.
std::vector<CheckRecord> verify_blueprint(const GraftBlueprint& bp, const TruncParams& trunc);

// ---------------------------------------------------------------------------
// materialization

struct PiNode {
    enum class Kind { supp, imp };
    Kind kind = Kind::supp;
    Seq seq;  // supp: the standard-tree node
    // imp: blueprint identity (stage, root) plus selector and level
    int stage = -1;
    Seq root;
    Seq selector;
    std::uint32_t level = 0;
    bool sons_complete = false;  // all sons materialized up to the width cut

    std::string str() const {
        if (kind == Kind::supp) return "supp" + seq.str();
        return "imp[n=" + std::to_string(stage) + ",v=" + root.str() + "," + selector.str() +
               "^" + std::to_string(level) + "]";
    }
};

/// Depth-bounded materialization of the foliage hybrid: an explicit foliage
/// tree over hybrid nodes, leaves already diminished by the loss.
struct PiTree {
    FoliageTree<BaireUniverse> tree;
    std::vector<PiNode> nodes;  // indexed by node id
    SetExpr loss;

    std::optional<NodeId> find_supp(const Seq& y) const {
        for (std::size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].kind == PiNode::Kind::supp && nodes[i].seq == y)
                return static_cast<NodeId>(i);
        return std::nullopt;
    }
};

PiTree materialize_pi_tree(const PipelineState& state, std::size_t depth, std::size_t width);

/// Evidence that the materialization behaves like a pi-tree at the
/// truncation: rootedness, exact interior leaf partitions (blueprint-root
/// partitions are stratum-exact one level short of the materialization
/// depth, everything else at full depth), sibling disjointness and leaf
/// monotonicity (which yield splittability), nonempty leaves, and nested
/// branch fruits confined to cylinders of length at least branch depth - 2.
std::vector<CheckRecord> verify_materialized(const PipelineState& state, const PiTree& h,
                                             std::size_t depth, std::size_t width);

// ---------------------------------------------------------------------------
// shoot certificates

/// Certificate that shoot_H(x) pi-refines shoot_S(y), by the finite-exception
/// sufficient condition: every materialized son of x outside the exceptions
/// is a standard son of y whose H-leaf is contained in its S-leaf.
struct ShootCertificate {
    bool ok = false;
    bool truncated = false;  // failure came from the truncation, not a refutation
    std::string detail;
    std::string case_name;  // "support" or "blueprint"
    std::string witness;    // description of the witness node x
    Seq target;             // y
    std::size_t checked = 0;
    std::size_t exceptions = 0;
};

ShootCertificate shoots_refinement(const PiTree& h, NodeId x, const Seq& y,
                                   const std::vector<NodeId>& exceptions, std::size_t depth,
                                   std::size_t width);

struct ShootSample {
    Seq p;  // a point prefix in Y = flesh(H)
    Seq y;  // a scope node of S: y is a prefix of p
};

/// For each sample, finds x in scope_H(p) whose shoot refines shoot_S(y),
/// following the two proof cases (support node / blueprint node), and
/// re-validates the certificate by enumeration.
std::vector<ShootCertificate> shoots_into_check(const PipelineState& state, const PiTree& h,
                                                const std::vector<ShootSample>& samples);

/// Composition with the cylinder base: for each sample, certifies a shoot
/// member inside the base neighbourhood S_y intersected with Y.
std::vector<ShootCertificate> grows_into_subspace_check(const PipelineState& state,
                                                        const PiTree& h,
                                                        const std::vector<ShootSample>& samples);

/// Deterministic sample generator covering both certificate cases.
std::vector<ShootSample> make_shoot_samples(const PipelineState& state, std::size_t count,
                                            std::uint64_t seed);

/// Truncated grows-into check for a tier-2 foliage tree against a classified
/// set Y, over the cylinder neighbourhood base: for every stratum point p of
/// Y and every base neighbourhood S_u (u a prefix of p), some scope node
/// certifies a shoot refinement into S_u intersected with Y.  Returns
/// unknown when every candidate witness is cut off by the truncation.
Tri grows_into(const FoliageTree<BaireUniverse>& f, const SetExpr& y, std::size_t depth,
               std::size_t width);

}  // namespace foliage
