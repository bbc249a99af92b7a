#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <vector>

#include "tasep/common.hpp"
#include "tasep/rng.hpp"

namespace tasep::detail {

inline std::uint64_t bond_stream_key(std::uint64_t seed, Site bond) {
    return rng::derive(rng::derive(seed, rng::kBondStream), static_cast<std::uint64_t>(bond));
}

/// Streams the superposition of the per-bond Poisson processes in global
/// (time, bond) order. Events are generated chunk by chunk: a fixed time
/// slice is filled bond-major (sequential generator access), bucket-sorted
/// by time, and finished with an insertion pass that enforces the exact
/// (time, bond) order. The emitted sequence is independent of the chunk
/// width: chunks partition time, and the final pass sorts each chunk
/// completely.
class ChunkedStream {
  public:
    struct Item {
        double time;
        std::int64_t bond;
    };

    ChunkedStream(SiteRange window, double horizon, std::uint64_t seed)
        : lo_(window.lo), horizon_(horizon), bonds_(static_cast<int>(window.bond_count())) {
        gen_.resize(bonds_);
        next_.resize(bonds_);
        for (int b = 0; b < bonds_; ++b) {
            gen_[b] = rng::SplitMix(bond_stream_key(seed, lo_ + b));
            next_[b] = rng::exponential(gen_[b]);
        }
        chunk_width_ = std::max(1.0, 32768.0 / bonds_);
    }

    bool peek(Item& out) {
        while (pos_ == buf_.size()) {
            if (!fill_chunk()) return false;
        }
        out = buf_[pos_];
        return true;
    }

    void pop() { ++pos_; }

    template <class Fn>
    void drain_until(double t_end, Fn&& fn) {
        for (;;) {
            while (pos_ < buf_.size()) {
                const Item& e = buf_[pos_];
                if (e.time > t_end) return;
                fn(e.bond, e.time);
                ++pos_;
            }
            if (chunk_lo_ >= t_end || !fill_chunk()) return;
        }
    }

  private:
    bool fill_chunk() {
        buf_.clear();
        pos_ = 0;
        while (buf_.empty()) {
            if (chunk_lo_ >= horizon_) return false;
            double hi = std::min(chunk_lo_ + chunk_width_, horizon_);
            for (int b = 0; b < bonds_; ++b) {
                double t = next_[b];
                while (t <= hi) {
                    buf_.push_back({t, lo_ + b});
                    t += rng::exponential(gen_[b]);
                }
                next_[b] = t;
            }
            sort_chunk(chunk_lo_, hi);
            chunk_lo_ = hi;
        }
        return true;
    }

    void sort_chunk(double t_lo, double t_hi) {
        const std::size_t n = buf_.size();
        if (n < 2) return;
        // spread by time into ~n uniform buckets, then fix the few local
        // inversions; bucket boundaries never reorder distinct times
        const std::size_t nb = std::bit_ceil(std::max<std::size_t>(n, 16));
        const double inv = static_cast<double>(nb) / (t_hi - t_lo);
        counts_.assign(nb + 1, 0);
        auto bucket_of = [&](double t) {
            auto k = static_cast<std::size_t>((t - t_lo) * inv);
            return k >= nb ? nb - 1 : k;
        };
        for (const Item& e : buf_) ++counts_[bucket_of(e.time) + 1];
        for (std::size_t k = 1; k <= nb; ++k) counts_[k] += counts_[k - 1];
        scratch_.resize(n);
        for (const Item& e : buf_) scratch_[counts_[bucket_of(e.time)]++] = e;
        buf_.swap(scratch_);
        for (std::size_t i = 1; i < n; ++i) {
            Item e = buf_[i];
            std::size_t j = i;
            while (j > 0 && (e.time < buf_[j - 1].time ||
                             (e.time == buf_[j - 1].time && e.bond < buf_[j - 1].bond))) {
                buf_[j] = buf_[j - 1];
                --j;
            }
            buf_[j] = e;
        }
    }

    Site lo_ = 0;
    double horizon_ = 0.0;
    int bonds_ = 0;
    double chunk_width_ = 1.0;
    double chunk_lo_ = 0.0;
    std::vector<rng::SplitMix> gen_;
    std::vector<double> next_;
    std::vector<Item> buf_;
    std::vector<Item> scratch_;
    std::vector<std::uint32_t> counts_;
    std::size_t pos_ = 0;
};

}  // namespace tasep::detail
