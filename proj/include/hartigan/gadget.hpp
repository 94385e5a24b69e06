#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hartigan/clustering.hpp"
#include "hartigan/errors.hpp"
#include "hartigan/geometry.hpp"
#include "hartigan/local_search.hpp"
#include "hartigan/point_set.hpp"
#include "hartigan/rational.hpp"

namespace hartigan {

// ---------------------------------------------------------------------------
// Worst-case family on the line.
//
// The instance is a chain of m gadgets. Gadget 0 is a single point f with one
// cluster. Every other gadget G_i has four points (ordered p_i < b_i < a_i <
// q_i on the line) and two clusters C0(G_i), C1(G_i). G_1 uses the base
// coordinates a=9, b=6, p=5, q=13; each later gadget is the previous one
// scaled by 5 and shifted by 8, so corresponding coordinates satisfy
// x_{i+1} = 5 x_i + 8 exactly. The chain executes a scripted schedule in
// which each gadget wakes its lower neighbor twice per own day, which makes
// the schedule length grow like 3 * 2^(m-1).
// ---------------------------------------------------------------------------

enum class Role { A, B, P, Q, F };

inline const char* role_name(Role r) {
    switch (r) {
        case Role::A: return "a";
        case Role::B: return "b";
        case Role::P: return "p";
        case Role::Q: return "q";
        case Role::F: return "f";
    }
    return "?";
}

inline long unit_coordinate(Role r) {
    switch (r) {
        case Role::A: return 9;
        case Role::B: return 6;
        case Role::P: return 5;
        case Role::Q: return 13;
        case Role::F: return 0;
    }
    return 0;
}

inline constexpr long kGadgetTranslation = 8;  // shift between consecutive gadgets

/// Coordinate of role `r` in gadget i >= 1: 5^(i-1) * unit + 2 * (5^(i-1) - 1).
inline Rational gadget_point(int i, Role r) {
    if (i < 1) throw InvariantViolation("gadget_point: gadget index must be >= 1");
    if (r == Role::F) return Rational(0);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 5, static_cast<unsigned long>(i - 1));
    mpz_class value = scale * unit_coordinate(r) + 2 * (scale - 1);
    return Rational(mpq_class(value));
}

/// What a scripted move does, in schedule terms.
enum class GadgetMoveKind {
    MorningWake,     // p_i leaves C0(G_i) to wake the neighbor below
    SleepPark,       // p_i leaves C1(G_i); the gadget falls asleep
    WakePHome,       // p_i returns from its parked position to C0(G_i)
    WakeQHome,       // q_i returns from C1(G_i) to C0(G_i)
    GuestToC1,       // a visiting p returns home into C1 of its own gadget
    GuestToC0,       // a visiting p returns home into C0 of its own gadget
    AfternoonEnter,  // q_i joins C1(G_i); the gadget enters its afternoon
};

struct GadgetMove {
    int point;
    int src;
    int dst;
    GadgetMoveKind kind;
    int gadget;  // the gadget whose schedule step this is
};

/// The instance of the worst-case family: points (exact rationals on the
/// line), role labels, and the prescribed initial clustering.
struct GadgetInstance {
    int m = 0;
    int k = 0;
    PointSet<Rational> points{1};
    std::vector<std::string> labels;
    std::vector<int> initial_assignment;

    Clustering<Rational> initial_clustering() const {
        return Clustering<Rational>::build(points, initial_assignment, k);
    }

    // Point ids: f is 0; gadget i >= 1 holds a,b,p,q at 4(i-1)+1 .. 4(i-1)+4.
    int point_id(int gadget, Role r) const {
        if (gadget == 0) return 0;
        int base = 4 * (gadget - 1);
        switch (r) {
            case Role::A: return base + 1;
            case Role::B: return base + 2;
            case Role::P: return base + 3;
            case Role::Q: return base + 4;
            case Role::F: break;
        }
        throw InvariantViolation("point_id: bad role");
    }
    // Cluster ids: C0(G_0) is 0; gadget i >= 1 owns 2i-1 (C0) and 2i (C1).
    int c0(int gadget) const { return gadget == 0 ? 0 : 2 * gadget - 1; }
    int c1(int gadget) const {
        if (gadget < 1) throw InvariantViolation("c1: leaf has a single cluster");
        return 2 * gadget;
    }
};

/// Build the m-gadget instance (n = 4m-3 points, k = 2m-1 clusters) with its
/// initial clustering: every gadget asleep except the top one, which starts
/// in its morning configuration. An asleep gadget's p is housed below: in
/// C1 of the next gadget down, or in the leaf cluster for gadget 1.
inline GadgetInstance build_instance(int m) {
    if (m < 2) throw InvariantViolation("build_instance: m must be >= 2");
    GadgetInstance inst;
    inst.m = m;
    inst.k = 2 * m - 1;

    inst.points = PointSet<Rational>(1);
    inst.labels.clear();
    Rational f(0);
    inst.points.add_point({&f, 1});
    inst.labels.push_back("f");
    for (int i = 1; i <= m - 1; ++i) {
        for (Role r : {Role::A, Role::B, Role::P, Role::Q}) {
            Rational x = gadget_point(i, r);
            inst.points.add_point({&x, 1});
            inst.labels.push_back(std::string(role_name(r)) + "_" + std::to_string(i));
        }
    }

    inst.initial_assignment.assign(4 * m - 3, -1);
    inst.initial_assignment[0] = 0;  // f
    for (int i = 1; i <= m - 1; ++i) {
        inst.initial_assignment[inst.point_id(i, Role::B)] = inst.c0(i);
        inst.initial_assignment[inst.point_id(i, Role::A)] = inst.c1(i);
        if (i == m - 1) {  // morning: C0 = {p, q, b}, C1 = {a}
            inst.initial_assignment[inst.point_id(i, Role::P)] = inst.c0(i);
            inst.initial_assignment[inst.point_id(i, Role::Q)] = inst.c0(i);
        } else {  // asleep: C0 = {b}, C1 = {a, q}, p housed below
            inst.initial_assignment[inst.point_id(i, Role::Q)] = inst.c1(i);
            inst.initial_assignment[inst.point_id(i, Role::P)] =
                (i >= 2) ? inst.c1(i - 1) : inst.c0(0);
        }
    }
    return inst;
}

namespace detail {

// Per-gadget schedule state. Asleep is the freshly-parked configuration
// (own p housed below); Rest is the settled one (own p back in C0) reached
// right after the neighbor below has been roused.
enum class GadgetPhase { Asleep, MorningStart, MorningReturned, Afternoon, Rest };

class ScheduleMachine {
public:
    explicit ScheduleMachine(const GadgetInstance& inst) : inst_(inst) {
        int m = inst.m;
        phase_.assign(m, GadgetPhase::Asleep);
        pos_p_.assign(m, -1);
        pos_q_.assign(m, -1);
        phase_[m - 1] = GadgetPhase::MorningStart;
        for (int i = 1; i <= m - 1; ++i) {
            pos_p_[i] = inst.initial_assignment[inst.point_id(i, Role::P)];
            pos_q_[i] = inst.initial_assignment[inst.point_id(i, Role::Q)];
        }
    }

    std::vector<GadgetMove> run() {
        std::vector<GadgetMove> out;
        while (true) {
            int actor = next_actor();
            if (actor < 0)
                throw InvariantViolation("schedule machine: no ready gadget before the top slept");
            if (run_block(actor, out)) break;
        }
        return out;
    }

private:
    int next_actor() const {
        for (int i = 1; i <= inst_.m - 1; ++i) {
            switch (phase_[i]) {
                case GadgetPhase::MorningStart:
                case GadgetPhase::Afternoon:
                    if (neighbor_settled(i)) return i;
                    break;
                case GadgetPhase::MorningReturned:
                    return i;
                default:
                    break;
            }
        }
        return -1;
    }

    bool neighbor_settled(int i) const {
        if (i == 1) return true;  // the leaf is always ready to receive
        return phase_[i - 1] == GadgetPhase::Asleep || phase_[i - 1] == GadgetPhase::Rest;
    }

    int welcome(int below) const { return below == 0 ? inst_.c0(0) : inst_.c1(below); }

    void emit(std::vector<GadgetMove>& out, int point, int src, int dst, GadgetMoveKind kind,
              int gadget) {
        out.push_back(GadgetMove{point, src, dst, kind, gadget});
    }

    // Wake gadget j after a guest p arrived in C1(G_j): bring its own p home
    // if parked, bring q home, then send the guest back to its own gadget.
    void rouse(int j, int guest_owner, int evict_dst, GadgetMoveKind evict_kind,
               std::vector<GadgetMove>& out) {
        int pj = inst_.point_id(j, Role::P);
        int qj = inst_.point_id(j, Role::Q);
        if (pos_p_[j] != inst_.c0(j)) {
            emit(out, pj, pos_p_[j], inst_.c0(j), GadgetMoveKind::WakePHome, j);
            pos_p_[j] = inst_.c0(j);
        }
        emit(out, qj, inst_.c1(j), inst_.c0(j), GadgetMoveKind::WakeQHome, j);
        pos_q_[j] = inst_.c0(j);
        int guest = inst_.point_id(guest_owner, Role::P);
        emit(out, guest, inst_.c1(j), evict_dst, evict_kind, guest_owner);
        pos_p_[guest_owner] = evict_dst;
        phase_[j] = GadgetPhase::MorningStart;
    }

    // Returns true when the schedule is complete.
    bool run_block(int i, std::vector<GadgetMove>& out) {
        int pi = inst_.point_id(i, Role::P);
        int qi = inst_.point_id(i, Role::Q);
        switch (phase_[i]) {
            case GadgetPhase::MorningStart: {
                int below = i - 1;
                emit(out, pi, inst_.c0(i), welcome(below), GadgetMoveKind::MorningWake, i);
                pos_p_[i] = welcome(below);
                if (below == 0) {
                    emit(out, pi, welcome(0), inst_.c1(i), GadgetMoveKind::GuestToC1, i);
                    pos_p_[i] = inst_.c1(i);
                } else {
                    rouse(below, i, inst_.c1(i), GadgetMoveKind::GuestToC1, out);
                }
                phase_[i] = GadgetPhase::MorningReturned;
                return false;
            }
            case GadgetPhase::MorningReturned: {
                emit(out, qi, inst_.c0(i), inst_.c1(i), GadgetMoveKind::AfternoonEnter, i);
                pos_q_[i] = inst_.c1(i);
                phase_[i] = GadgetPhase::Afternoon;
                return false;
            }
            case GadgetPhase::Afternoon: {
                int below = i - 1;
                emit(out, pi, inst_.c1(i), welcome(below), GadgetMoveKind::SleepPark, i);
                pos_p_[i] = welcome(below);
                phase_[i] = GadgetPhase::Asleep;
                if (i == inst_.m - 1) return true;  // the schedule ends here
                if (below == 0) {
                    emit(out, pi, welcome(0), inst_.c0(i), GadgetMoveKind::GuestToC0, i);
                    pos_p_[i] = inst_.c0(i);
                } else {
                    rouse(below, i, inst_.c0(i), GadgetMoveKind::GuestToC0, out);
                }
                phase_[i] = GadgetPhase::Rest;
                return false;
            }
            default:
                throw InvariantViolation("schedule machine: asleep gadget cannot act");
        }
    }

    const GadgetInstance& inst_;
    std::vector<GadgetPhase> phase_;
    std::vector<int> pos_p_;
    std::vector<int> pos_q_;
};

}  // namespace detail

/// Deterministic scripted move list: starts from the initial clustering and
/// ends the moment the top gadget falls asleep. Length is 3 * 2^(m-1) + m - 4.
inline std::vector<GadgetMove> scripted_sequence_moves(const GadgetInstance& inst) {
    detail::ScheduleMachine machine(inst);
    return machine.run();
}

inline std::vector<GadgetMove> scripted_sequence(int m) {
    GadgetInstance inst = build_instance(m);
    return scripted_sequence_moves(inst);
}

inline std::vector<ScriptMove> to_script(const std::vector<GadgetMove>& moves) {
    std::vector<ScriptMove> out;
    out.reserve(moves.size());
    for (const auto& mv : moves) out.push_back(ScriptMove{mv.point, mv.src, mv.dst});
    return out;
}

struct VerificationReport {
    Trace<Rational> trace;
    Rational min_gain;
    bool final_is_hw_local_opt = false;
    long total_moves() const { return trace.iterations; }
};

/// Replay a scripted move list in exact arithmetic. Every move must have a
/// strictly positive exact gain; otherwise ScriptInvalid is thrown with the
/// offending index and the exact gain.
inline VerificationReport verify_sequence(const GadgetInstance& inst,
                                          const std::vector<GadgetMove>& moves) {
    Clustering<Rational> clustering = inst.initial_clustering();
    PivotRule rule = PivotRule::scripted(to_script(moves));
    VerificationReport report;
    report.trace = hw_run(inst.points, clustering, std::move(rule),
                          static_cast<long>(moves.size()) + 1);
    if (report.trace.terminated != TerminationReason::ScriptExhausted ||
        report.trace.iterations != static_cast<long>(moves.size()))
        throw InvariantViolation("verify_sequence: replay did not consume the whole script");
    report.min_gain = report.trace.moves.empty() ? Rational(0) : report.trace.moves[0].gain;
    for (const auto& mv : report.trace.moves)
        if (mv.gain < report.min_gain) report.min_gain = mv.gain;
    report.final_is_hw_local_opt = is_hw_local_opt(clustering, inst.points);
    return report;
}

/// The ten schedule inequalities evaluated exactly at base scale, in the
/// generic position: the acting gadget has coordinates (a,b,p,q) =
/// (9,6,5,13), its lower neighbor (x-8)/5 of those, its upper neighbor
/// 5x+8, and the leaf sits at 0. All ten values are strictly positive.
inline std::vector<std::pair<std::string, Rational>> appendix_inequalities() {
    const Rational a(9), b(6), p(5), q(13), f(0);
    const Rational a_lo(1, 5), q_lo(1);  // (9-8)/5, (13-8)/5
    const Rational p_hi(33);             // 5*5+8

    // Gain of moving x from S (containing x) to T, all on the line.
    auto delta = [](const Rational& x, std::vector<Rational> S, std::vector<Rational> T) {
        auto cm = [](const std::vector<Rational>& v) {
            Rational s(0);
            for (const auto& e : v) s += e;
            return s / Rational(static_cast<long>(v.size()));
        };
        Rational ns(static_cast<long>(S.size())), nt(static_cast<long>(T.size()));
        Rational ds = x - cm(S), dt = x - cm(T);
        return ns / (ns - Rational(1)) * ds * ds - nt / (nt + Rational(1)) * dt * dt;
    };

    std::vector<std::pair<std::string, Rational>> out;
    out.emplace_back("Delta_p({p,q,b},{a-,q-})", delta(p, {p, q, b}, {a_lo, q_lo}));
    out.emplace_back("Delta_p({a-,p},{a})", delta(p, {a_lo, p}, {a}));
    out.emplace_back("Delta_q({b,q},{a,p})", delta(q, {b, q}, {a, p}));
    out.emplace_back("Delta_p({a,p,q},{a-,q-})", delta(p, {a, p, q}, {a_lo, q_lo}));
    out.emplace_back("Delta_p({a-,p},{b})", delta(p, {a_lo, p}, {b}));
    out.emplace_back("Delta_q({a,q,p+},{p,b})", delta(q, {a, q, p_hi}, {p, b}));
    out.emplace_back("Delta_p({p,q,b},{f})", delta(p, {p, q, b}, {f}));
    out.emplace_back("Delta_p({f,p},{a})", delta(p, {f, p}, {a}));
    out.emplace_back("Delta_p({a,p,q},{f})", delta(p, {a, p, q}, {f}));
    out.emplace_back("Delta_p({f,p},{b})", delta(p, {f, p}, {b}));
    return out;
}

}  // namespace hartigan
