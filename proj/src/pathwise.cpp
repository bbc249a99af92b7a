#include <algorithm>
#include <array>

#include "tasep/experiments.hpp"
#include "tasep/rng.hpp"

// One replica of the exact pathwise suite. Every process below shares the
// same per-site uniforms U and the same event list, so each listed identity
// must hold exactly, event by event; any deviation counts as a violation of
// the corresponding check.

namespace tasep::detail {

namespace {

constexpr std::uint8_t kHole = TwoClassConfiguration::kHole;
constexpr std::uint8_t kFirst = TwoClassConfiguration::kFirst;
constexpr std::uint8_t kSecond = TwoClassConfiguration::kSecond;

inline bool apply_plain(std::uint8_t* occ, Site i) {
    if (occ[i] == 1 && occ[i + 1] == 0) {
        occ[i] = 0;
        occ[i + 1] = 1;
        return true;
    }
    return false;
}

// 0 = nothing, 1 = particle moved right into a hole, 2 = first/second swap
inline int apply_two_class(std::uint8_t* lab, Site i) {
    const std::uint8_t a = lab[i], b = lab[i + 1];
    if (b == kHole && a != kHole) {
        lab[i] = kHole;
        lab[i + 1] = a;
        return 1;
    }
    if (a == kFirst && b == kSecond) {
        lab[i] = kSecond;
        lab[i + 1] = kFirst;
        return 2;
    }
    return 0;
}

struct TrackedLabels {
    std::vector<std::uint8_t> lab;
    Site pos = 0;  // relative index of the tracked second-class particle

    int apply(Site i) {
        const int kind = apply_two_class(lab.data(), i);
        if (kind == 1 && i == pos) {
            pos = i + 1;
        } else if (kind == 2 && i + 1 == pos) {
            pos = i;
        }
        return kind;
    }
};

long long total(const std::vector<std::uint8_t>& occ) {
    long long n = 0;
    for (std::uint8_t x : occ) n += x != 0;
    return n;
}

}  // namespace

const std::vector<std::string>& pathwise_check_names() {
    static const std::vector<std::string> names = {
        "attractivity",
        "discrepancy-conservation",
        "markov",
        "marginal-consistency",
        "cut-commutation",
        "er233",
        "lemma81-identity",
        "lemma81-inequality",
        "sandwich",
        "zero-flux-tagged",
        "zero-flux-second-class",
        "flux-equivalence",
        "two-class-flux-difference",
        "rightmost-accessor",
        "tracker-in-safe",
    };
    return names;
}

std::map<std::string, long long> run_pathwise_replica(const PathwiseParams& params,
                                                      SeedPair seeds) {
    const SiteRange w = params.window;
    const double T = params.horizon;
    const std::size_t S = static_cast<std::size_t>(w.site_count());
    const Site lo = w.lo;
    const Site origin = -lo;  // relative index of site 0
    require(w.contains(0), "pathwise window must contain the origin");

    std::map<std::string, long long> bad;
    for (const std::string& name : pathwise_check_names()) bad[name] = 0;

    // replica parameters: densities lambda >= alpha >= rho, a line speed,
    // and the split time for the Markov identity
    rng::SplitMix param_rng(rng::derive(seeds.init, 0x504152414dULL));
    std::array<double, 3> d = {param_rng.next_open_unit(), param_rng.next_open_unit(),
                               param_rng.next_open_unit()};
    std::sort(d.begin(), d.end(), std::greater<>());
    const double lambda = d[0], alpha = d[1], rho = d[2];
    const double line_speed = 2.0 * param_rng.next_open_unit() - 1.0;
    const double split_time = T * param_rng.next_open_unit();

    // shared-uniform initial states
    std::vector<std::uint8_t> pl_lambda(S), pl_alpha(S), pl_rho(S), pl_step(S), pl_rho_tag(S),
        pl_er_hi(S), pl_er_lo(S);
    std::vector<std::uint8_t> tcM(S), tcAcc(S);
    TrackedLabels tcR_l, tcR_a, tcR_r, tcY_rl, tcY_ra, tcY_al, tcCut, tcEr;
    const std::array<TrackedLabels*, 8> tracked = {&tcR_l, &tcR_a, &tcR_r, &tcY_rl,
                                                   &tcY_ra, &tcY_al, &tcCut, &tcEr};
    for (TrackedLabels* t : tracked) {
        t->lab.assign(S, kHole);
        t->pos = origin;
    }

    const std::uint64_t site_key = rng::derive(seeds.init, rng::kSiteStream);
    for (std::size_t idx = 0; idx < S; ++idx) {
        const Site x = lo + static_cast<Site>(idx);
        const double u = rng::unit_at(site_key, x);
        const bool in_l = u < lambda, in_a = u < alpha, in_r = u < rho;
        const bool in_step = x <= 0 ? in_l : in_r;
        pl_lambda[idx] = in_l;
        pl_alpha[idx] = in_a;
        pl_rho[idx] = in_r;
        pl_step[idx] = in_step;
        pl_rho_tag[idx] = x == 0 ? 1 : in_r;
        // eta := sigma + Gamma_0 xi for the pair (rho, lambda): the rho draw
        // left of the origin, the lambda draw right, origin forced
        pl_er_hi[idx] = x == 0 ? 1 : (x < 0 ? in_r : in_l);
        pl_er_lo[idx] = x == 0 ? 0 : (x < 0 ? in_r : in_l);
        tcM[idx] = in_r ? kFirst : (in_l ? kSecond : kHole);
        if (x == 0) {
            for (TrackedLabels* t : tracked) t->lab[idx] = kSecond;
            tcAcc[idx] = kSecond;
            continue;
        }
        tcR_l.lab[idx] = in_l ? kFirst : kHole;
        tcR_a.lab[idx] = in_a ? kFirst : kHole;
        tcR_r.lab[idx] = in_r ? kFirst : kHole;
        tcY_rl.lab[idx] = in_r ? kFirst : (in_l ? kSecond : kHole);
        tcY_ra.lab[idx] = in_r ? kFirst : (in_a ? kSecond : kHole);
        tcY_al.lab[idx] = in_a ? kFirst : (in_l ? kSecond : kHole);
        // second-class labels cut at the origin
        tcCut.lab[idx] = in_r ? kFirst : (in_l && x > 0 ? kSecond : kHole);
        tcEr.lab[idx] = pl_er_lo[idx] ? kFirst : kHole;
        // discrepancies of (rho draw with forced hole, step with forced
        // particle): right of the origin the step equals the rho draw
        tcAcc[idx] = in_r ? kFirst : (in_step ? kSecond : kHole);
    }

    const std::vector<std::uint8_t> init_rho_tag = pl_rho_tag;
    const std::vector<std::uint8_t> init_step = pl_step;
    const long long disc_lr0 = total(pl_lambda) - total(pl_rho);
    long long xi_right0 = 0;
    for (std::size_t idx = static_cast<std::size_t>(origin) + 1; idx < S; ++idx) {
        xi_right0 += tcY_rl.lab[idx] == kSecond;
    }

    PoissonField field(w, T, sample_field(w.lo, w.hi, T, seeds.field).events());

    const ObservationLine line = ObservationLine::moving(line_speed);
    FluxCounter fc_tag(line), fc_G(line), fc_Fs(line), fc_Fu(line), fc_l(line), fc_r(line);
    auto occ_at = [&](const std::vector<std::uint8_t>& v) {
        return [&v, lo, w](Site x) -> int { return w.contains(x) ? v[x - lo] != kHole : 0; };
    };
    auto label_at = [&](const TrackedLabels& t, std::uint8_t which) {
        return [&t, which, lo, w](Site x) -> int {
            return w.contains(x) && t.lab[x - lo] == which;
        };
    };

    Site tag_pos = origin;  // tracked particle of the rho process

    EventStream stream(field);
    stream.drain_until(T, [&](Site bond, double time) {
        const Site i = bond - lo;

        // moving-line counters look at the pre-event occupancies
        fc_tag.advance_line(time, occ_at(pl_rho_tag));
        fc_G.advance_line(time, label_at(tcY_rl, kSecond));
        fc_Fs.advance_line(time, label_at(tcY_rl, kFirst));
        fc_Fu.advance_line(time, occ_at(tcY_rl.lab));
        fc_l.advance_line(time, occ_at(pl_lambda));
        fc_r.advance_line(time, occ_at(pl_rho));

        if (apply_plain(pl_lambda.data(), i)) fc_l.on_move(bond, bond + 1);
        apply_plain(pl_alpha.data(), i);
        if (apply_plain(pl_rho.data(), i)) fc_r.on_move(bond, bond + 1);
        apply_plain(pl_step.data(), i);
        apply_plain(pl_er_hi.data(), i);
        apply_plain(pl_er_lo.data(), i);
        if (apply_plain(pl_rho_tag.data(), i)) {
            fc_tag.on_move(bond, bond + 1);
            if (i == tag_pos) tag_pos = i + 1;
        }
        apply_two_class(tcM.data(), i);
        apply_two_class(tcAcc.data(), i);
        tcR_l.apply(i);
        tcR_a.apply(i);
        tcR_r.apply(i);
        tcY_ra.apply(i);
        tcY_al.apply(i);
        tcCut.apply(i);
        tcEr.apply(i);
        {
            const std::uint8_t moved = tcY_rl.lab[i];
            const int kind = tcY_rl.apply(i);
            if (kind == 1) {
                fc_Fu.on_move(bond, bond + 1);
                if (moved == kFirst) fc_Fs.on_move(bond, bond + 1);
                if (moved == kSecond) fc_G.on_move(bond, bond + 1);
            } else if (kind == 2) {
                fc_Fs.on_move(bond, bond + 1);  // the first-class particle advanced
                fc_G.on_move(bond + 1, bond);   // the second-class one stepped back
            }
        }

        // attractivity at the two touched sites (inductively the full window)
        for (Site s : {i, i + 1}) {
            if (pl_rho[s] > pl_alpha[s] || pl_alpha[s] > pl_lambda[s] || pl_rho[s] > pl_step[s] ||
                pl_step[s] > pl_lambda[s]) {
                ++bad["attractivity"];
            }
        }
        if (tcR_a.pos < tcY_al.pos || tcR_a.pos > tcY_ra.pos) ++bad["sandwich"];
        if (tcEr.pos != tcY_rl.pos) ++bad["er233"];
        if (tcCut.pos != tcY_rl.pos) ++bad["cut-commutation"];
    });

    fc_tag.advance_line(T, occ_at(pl_rho_tag));
    fc_G.advance_line(T, label_at(tcY_rl, kSecond));
    fc_Fs.advance_line(T, label_at(tcY_rl, kFirst));
    fc_Fu.advance_line(T, occ_at(tcY_rl.lab));
    fc_l.advance_line(T, occ_at(pl_lambda));
    fc_r.advance_line(T, occ_at(pl_rho));

    // full-window attractivity and discrepancy conservation
    for (std::size_t idx = 0; idx < S; ++idx) {
        if (pl_rho[idx] > pl_alpha[idx] || pl_alpha[idx] > pl_lambda[idx] ||
            pl_rho[idx] > pl_step[idx] || pl_step[idx] > pl_lambda[idx]) {
            ++bad["attractivity"];
        }
    }
    if (total(pl_lambda) - total(pl_rho) != disc_lr0) ++bad["discrepancy-conservation"];

    // Markov property: split the run at a random time
    {
        Configuration direct(lo, pl_step);
        Configuration part = evolve(Configuration(lo, init_step), field, split_time);
        Configuration rest = evolve(part, time_shift(field, split_time), T - split_time);
        if (!(rest == direct)) ++bad["markov"];
    }

    // marginal consistency of the unforced coupled pair
    for (std::size_t idx = 0; idx < S; ++idx) {
        if ((tcM[idx] == kFirst) != (pl_rho[idx] == 1) ||
            (tcM[idx] != kHole) != (pl_lambda[idx] == 1)) {
            ++bad["marginal-consistency"];
            break;
        }
    }

    const Site y_rl = lo + tcY_rl.pos;
    const Site r_l = lo + tcR_l.pos, r_a = lo + tcR_a.pos, r_r = lo + tcR_r.pos;
    const Site r_er = lo + tcEr.pos;

    for (Site p : {y_rl, r_l, r_a, r_r, r_er, lo + tag_pos}) {
        if (!(p >= params.safe.lo && p <= params.safe.hi)) ++bad["tracker-in-safe"];
    }

    // cut commutation: sigma marginals agree; the cut process carries
    // exactly the second-class labels at or right of the tracked particle
    for (std::size_t idx = 0; idx < S; ++idx) {
        const Site x = lo + static_cast<Site>(idx);
        const bool sigma_same = (tcCut.lab[idx] == kFirst) == (tcY_rl.lab[idx] == kFirst);
        const bool xi_expected = tcY_rl.lab[idx] == kSecond && x >= y_rl;
        if (!sigma_same || (tcCut.lab[idx] == kSecond) != xi_expected) {
            ++bad["cut-commutation"];
            break;
        }
    }

    // er233: the forced-step process equals sigma plus the second-class
    // labels cut at the tracked position; the hole-forced variant differs
    // from it exactly at the tracked discrepancy
    for (std::size_t idx = 0; idx < S; ++idx) {
        const Site x = lo + static_cast<Site>(idx);
        const int rebuilt =
            (tcY_rl.lab[idx] == kFirst) || (tcY_rl.lab[idx] == kSecond && x >= y_rl);
        const int expect_lo = x == r_er ? 0 : rebuilt;
        if (pl_er_hi[idx] != rebuilt || pl_er_lo[idx] != expect_lo) {
            ++bad["er233"];
            break;
        }
    }

    // domination identities and inequalities over the safe window
    for (Site x = params.safe.lo; x <= params.safe.hi; ++x) {
        const std::size_t idx = static_cast<std::size_t>(x - lo);
        if (x > r_r && pl_step[idx] != pl_rho[idx]) ++bad["lemma81-identity"];
        if (x < r_l && pl_step[idx] != pl_lambda[idx]) ++bad["lemma81-identity"];
        if (x > r_a && pl_step[idx] > pl_alpha[idx]) ++bad["lemma81-inequality"];
        if (x < r_a && pl_alpha[idx] > pl_step[idx]) ++bad["lemma81-inequality"];
    }

    // direct crossing count against the label-count formula
    if (fc_tag.count() !=
        flux_by_labels(Configuration(lo, init_rho_tag), Configuration(lo, pl_rho_tag), line, T)) {
        ++bad["flux-equivalence"];
    }

    // zero flux along the tracked objects: the particle (or second-class)
    // count on their right is conserved
    {
        long long right_now = 0, right_then = 0;
        for (std::size_t idx = 0; idx < S; ++idx) {
            const Site x = lo + static_cast<Site>(idx);
            if (x > lo + tag_pos) right_now += pl_rho_tag[idx];
            if (x > 0) right_then += init_rho_tag[idx];
        }
        if (right_now != right_then) ++bad["zero-flux-tagged"];

        long long xi_right_now = 0;
        for (std::size_t idx = 0; idx < S; ++idx) {
            if (lo + static_cast<Site>(idx) > y_rl) xi_right_now += tcY_rl.lab[idx] == kSecond;
        }
        if (xi_right_now != xi_right0) ++bad["zero-flux-second-class"];
    }

    // two-class flux along the moving line: exactly the difference of the
    // coupled marginal fluxes, and within one discrepancy per forced origin
    // of the unforced stationary fluxes
    if (fc_G.count() != fc_Fu.count() - fc_Fs.count()) ++bad["two-class-flux-difference"];
    if (std::llabs(fc_G.count() - (fc_l.count() - fc_r.count())) > 2) {
        ++bad["two-class-flux-difference"];
    }

    // the tracked isolated discrepancy at density rho is the rightmost
    // second-class label of the (rho, step) coupling
    {
        Site rightmost = w.lo - 1;
        for (Site x = w.hi; x >= w.lo; --x) {
            if (tcAcc[x - lo] == kSecond) {
                rightmost = x;
                break;
            }
        }
        if (rightmost != r_r) ++bad["rightmost-accessor"];
    }

    return bad;
}

}  // namespace tasep::detail
