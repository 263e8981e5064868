// Copyright 2026 The Adapt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Addition, multiplication and division of pseudo-expansions as stream
// pipelines. Results come out most significant component first; the
// consumer pulls only as much as it needs.

#ifndef ADAPT_ARITH_HPP_
#define ADAPT_ARITH_HPP_

#include <memory>
#include <optional>
#include <vector>

#include "adapt/toolset.hpp"

namespace adapt {

// (6L + 6) / (n_max - 1 - 6L), the chain ratio bound of the adder for an
// input of L components. nullopt when the denominator is not positive.
inline std::optional<ExactRational> sum_chain_ratio(size_t length, const GenericFormat& fmt) {
  ExactRational six_l(static_cast<long>(6 * length));
  ExactRational den = ExactRational(fmt.n_max()) - 1 - six_l;
  if (den.sign() <= 0) return std::nullopt;
  return (six_l + 6) / den;
}

// 3 (1 + 2L) ulp, the tail-to-head ratio the adder guarantees.
inline ExactRational sum_tail_ratio(size_t length, const GenericFormat& fmt) {
  return ExactRational(static_cast<long>(3 * (1 + 2 * length))) * fmt.ulp();
}

namespace internal {

template <class Backend>
void RequireRadixTwo(const Backend& be, const char* what) {
  if (be.format().beta() != 2) throw DomainError(std::string(what) + ": radix 2 only");
}

}  // namespace internal

// C = A + B: MQ by magnitude, amplitude re-representation, Sigma3.
template <class Backend>
StreamPtr<Backend> add(const Backend& be, StreamPtr<Backend> a, StreamPtr<Backend> b,
                       Instrumentation* instr) {
  internal::RequireRadixTwo(be, "add");
  auto mq = std::make_unique<MergeQueue<Backend>>(be, std::move(a), std::move(b),
                                                  KeyPolicy::kMagnitude, instr, "add.mq");
  auto rr = std::make_unique<Rerepresent<Backend>>(be, std::move(mq), instr);
  return std::make_unique<Sigma3<Backend>>(be, std::move(rr), instr, "add.sigma3");
}

// Materialized inputs; also enforces the adder's side condition.
template <class Backend>
StreamPtr<Backend> add(const Backend& be, std::vector<typename Backend::value_type> a,
                       std::vector<typename Backend::value_type> b, Instrumentation* instr) {
  auto eps = sum_chain_ratio(a.size() + b.size(), be.format());
  if (!eps || *eps >= 1) throw DomainError("add: too many components for this precision");
  return add(be, StreamPtr<Backend>(std::make_unique<VectorSource<Backend>>(be, std::move(a))),
             StreamPtr<Backend>(std::make_unique<VectorSource<Backend>>(be, std::move(b))), instr);
}

// C = A * B: PP/PQ hi parts and the lo waiting queue merged by amplitude,
// then Sigma3.
template <class Backend>
StreamPtr<Backend> mul(const Backend& be, StreamPtr<Backend> a, StreamPtr<Backend> b,
                       Instrumentation* instr, PartialProductStats* stats = nullptr) {
  internal::RequireRadixTwo(be, "mul");
  auto [hi, lo] = pp_generate(be, std::move(a), std::move(b), instr, stats);
  auto mq = std::make_unique<MergeQueue<Backend>>(be, std::move(hi), std::move(lo),
                                                  KeyPolicy::kAmplitude, instr, "mul.mq");
  return std::make_unique<Sigma3<Backend>>(be, std::move(mq), instr, "mul.sigma3");
}

template <class Backend>
StreamPtr<Backend> mul(const Backend& be, std::vector<typename Backend::value_type> a,
                       std::vector<typename Backend::value_type> b, Instrumentation* instr,
                       PartialProductStats* stats = nullptr) {
  auto eps = sum_chain_ratio(2 * a.size() * b.size(), be.format());
  if (!eps || *eps >= 1) throw DomainError("mul: too many components for this precision");
  return mul(be, StreamPtr<Backend>(std::make_unique<VectorSource<Backend>>(be, std::move(a))),
             StreamPtr<Backend>(std::make_unique<VectorSource<Backend>>(be, std::move(b))), instr,
             stats);
}

// --- Division ------------------------------------------------------------------

// What one quotient digit was computed from, with the relative error budget
// certified at run time. eps = max(eps_w, eps_d, eps_q) and
// kappa = eps (3 + eps) / (1 - eps).
struct DivStep {
  ExactRational w;  // remainder head used for the guess
  ExactRational d;  // divisor head
  ExactRational q;  // the digit
  ExactRational eps_w, eps_d, eps_q, eps, kappa;
  bool certified = false;  // false when the budget could not be bounded below 1
  bool ordering_ok = true;
};

struct DivOptions {
  // Throw instead of counting when a new partial product is larger than
  // the last term taken from the pending pool.
  bool strict_ordering = false;
  uint64_t max_inserts_per_digit = 1u << 20;
};

// Q = R / D, one digit per pull. D is materialized; R streams. Each digit
// is the rounded quotient of the remainder head by d0 (+) d1; the products
// q * d0 are folded exactly into the remainder head, and the products of q
// with the rest of D are queued by magnitude and absorbed until the next
// pending term drops below 4 ulp of the head.
template <class Backend>
class DivStream : public Stream<Backend> {
 public:
  using V = typename Backend::value_type;
  using Item = StreamItem<V>;

  DivStream(Backend be, StreamPtr<Backend> r, std::vector<V> d, Instrumentation* instr,
            DivOptions options = {})
      : be_(std::move(be)), r_(std::move(r)), instr_(instr), options_(options),
        pool_(PoolLess{&be_}) {
    internal::RequireRadixTwo(be_, "div");
    std::vector<V> ds;
    for (V& x : d)
      if (!be_.is_zero(x)) ds.push_back(std::move(x));
    for (const V& x : ds) d_exact_ += be_.to_rational(x);
    if (d_exact_.is_zero()) throw DomainError("div: zero divisor");
    // Only the divisor's sign is factored out.
    if (d_exact_.sign() < 0) {
      negate_ = true;
      d_exact_ = -d_exact_;
      for (V& x : ds) x = be_.negate(x);
    }
    if (ds.size() >= 2) {
      auto [h0, h1] = be_.two_sum(ds[0], ds[1]);
      dh0_ = h0;
      if (!be_.is_zero(h1)) tail_.push_back(h1);
      for (size_t j = 2; j < ds.size(); ++j) tail_.push_back(ds[j]);
    } else {
      dh0_ = ds[0];
    }
    if (be_.is_zero(dh0_) || be_.sign(dh0_) < 0)
      throw DomainError("div: divisor head does not carry the divisor's sign");
    tail_suffix_.assign(tail_.size() + 1, ExactRational());
    for (size_t j = tail_.size(); j-- > 0;)
      tail_suffix_[j] = tail_suffix_[j + 1] + be_.to_rational(tail_[j]).abs();
    ExactRational dh0 = be_.to_rational(dh0_);
    eps_d_ = (d_exact_ - dh0).abs() / d_exact_;
    four_ulp_shift_ = 3 - be_.p();
    a_ = V();
    b_ = V();
  }

  PullStatus pull(Item* out) override {
    if (exhausted_) return PullStatus::kExhausted;
    if (Refine() == PullStatus::kFrozen) return PullStatus::kFrozen;
    if (be_.is_zero(a_)) {
      // Nothing pending anywhere: the remainder is exactly zero.
      exhausted_ = true;
      return PullStatus::kExhausted;
    }
    V q = be_.divide(a_, dh0_);
    DivStep step = Certify(q);
    auto [p, e] = be_.two_product(q, dh0_);
    Insert(be_.negate(p));
    Insert(be_.negate(e));
    if (!tail_.empty()) {
      auto first = be_.two_product(q, tail_[0]);
      if (has_last_pop_ && be_.compare_magnitude(first.hi, last_pop_) > 0) {
        step.ordering_ok = false;
        if (instr_) instr_->bump("div.order_violation");
        if (options_.strict_ordering)
          throw std::logic_error("div: new partial product exceeds pending terms");
      }
      gens_.push_back(Gen{q, 1});
      PushProduct(first, gens_.size() - 1);
    }
    steps_.push_back(std::move(step));
    out->value = negate_ ? be_.negate(q) : q;
    out->amplitude = be_.canonical_exponent(out->value);
    if (instr_) {
      instr_->fire("div");
      if (instr_->tracing())
        instr_->trace("stage=div in=" + be_.to_text(dh0_) + " out=" + be_.to_text(out->value) +
                      " state=" + be_.to_text(a_) + "," + be_.to_text(b_));
    }
    return PullStatus::kItem;
  }

  std::optional<ExactRational> tail_bound() const override {
    if (exhausted_) return ExactRational();
    auto pend = PendingBound();
    if (!pend) return std::nullopt;
    return ((be_.to_rational(a_) + be_.to_rational(b_)).abs() + *pend) / d_exact_;
  }

  const std::vector<DivStep>& steps() const { return steps_; }
  uint64_t spills() const { return spills_; }

 private:
  enum class Kind { kDividend, kProduct, kOther };
  struct PoolEntry {
    V value;
    Kind kind = Kind::kOther;
    size_t gen = 0;
  };
  struct PoolLess {
    const Backend* be;
    bool operator()(const PoolEntry& x, const PoolEntry& y) const {
      return be->compare_magnitude(x.value, y.value) < 0;
    }
  };
  struct Gen {
    V q;
    size_t next_j;  // index into tail_ of the next product to generate
  };

  // Pulls the next dividend component into the pool when none is there.
  PullStatus FeedDividend() {
    if (r_in_pool_ || r_done_) return PullStatus::kItem;
    Item it;
    for (;;) {
      PullStatus st = r_->pull(&it);
      if (st == PullStatus::kFrozen) return st;
      if (st == PullStatus::kExhausted) {
        r_done_ = true;
        return PullStatus::kItem;
      }
      if (be_.is_zero(it.value)) continue;
      pool_.insert(PoolEntry{std::move(it.value), Kind::kDividend, 0});
      r_in_pool_ = true;
      return PullStatus::kItem;
    }
  }

  // Absorbs pending terms until the largest is below 4 ulp of the head.
  PullStatus Refine() {
    uint64_t inserts = 0;
    for (;;) {
      if (FeedDividend() == PullStatus::kFrozen) return PullStatus::kFrozen;
      if (pool_.empty()) return PullStatus::kItem;
      if (!be_.is_zero(a_) &&
          be_.compare_magnitude(pool_.top().value, be_.scale2(a_, four_ulp_shift_)) < 0)
        return PullStatus::kItem;
      PoolEntry e = pool_.pop_max();
      if (e.kind == Kind::kDividend) r_in_pool_ = false;
      if (e.kind == Kind::kProduct) {
        Gen& g = gens_[e.gen];
        if (g.next_j < tail_.size()) {
          PushProduct(be_.two_product(g.q, tail_[g.next_j]), e.gen);
          ++g.next_j;
        }
      }
      last_pop_ = e.value;
      has_last_pop_ = true;
      Insert(e.value);
      if (++inserts > options_.max_inserts_per_digit)
        throw std::logic_error("div: refinement does not converge");
    }
  }

  // Queues -(q * d_j) as its two parts.
  void PushProduct(const EftPair<V>& p, size_t gen) {
    pool_.insert(PoolEntry{be_.negate(p.hi), Kind::kProduct, gen});
    if (!be_.is_zero(p.lo)) pool_.insert(PoolEntry{be_.negate(p.lo), Kind::kOther, 0});
  }

  // (a, b) += x exactly; a third residual goes back to the pool.
  void Insert(const V& x) {
    if (be_.is_zero(x)) return;
    auto [u, v] = be_.two_sum(b_, x);
    auto [a1, w] = be_.two_sum(a_, u);
    auto [b1, c1] = be_.two_sum(w, v);
    auto [a2, b2] = be_.two_sum(a1, b1);
    a_ = a2;
    b_ = b2;
    if (!be_.is_zero(c1)) {
      pool_.insert(PoolEntry{c1, Kind::kOther, 0});
      ++spills_;
    }
    if (instr_) instr_->fire("div.insert");
  }

  // Bound on |exact remainder - (a + b)|.
  std::optional<ExactRational> PendingBound() const {
    ExactRational sum;
    pool_.for_each([&](const PoolEntry& e) { sum += be_.to_rational(e.value).abs(); });
    for (const Gen& g : gens_)
      sum += be_.to_rational(g.q).abs() * tail_suffix_[std::min(g.next_j, tail_.size())];
    if (!r_done_) {
      auto tb = r_->tail_bound();
      if (!tb) return std::nullopt;
      sum += *tb;
    }
    return sum;
  }

  DivStep Certify(const V& q) const {
    DivStep s;
    s.w = be_.to_rational(a_);
    s.d = be_.to_rational(dh0_);
    s.q = be_.to_rational(q);
    s.eps_d = eps_d_;
    ExactRational ratio = s.w / s.d;
    s.eps_q = (s.q - ratio).abs() / ratio.abs();
    auto pend = PendingBound();
    if (pend) {
      ExactRational err = be_.to_rational(b_).abs() + *pend;
      if (err < s.w.abs()) {
        s.eps_w = err / (s.w.abs() - err);
        s.eps = max(s.eps_w, max(s.eps_d, s.eps_q));
        if (s.eps < 1) {
          s.kappa = s.eps * (s.eps + 3) / (ExactRational(1) - s.eps);
          s.certified = true;
        }
      }
    }
    return s;
  }

  Backend be_;
  StreamPtr<Backend> r_;
  Instrumentation* instr_;
  DivOptions options_;
  PriorityQueue<PoolEntry, PoolLess> pool_;
  std::vector<V> tail_;
  std::vector<ExactRational> tail_suffix_;
  std::vector<Gen> gens_;
  std::vector<DivStep> steps_;
  ExactRational d_exact_, eps_d_;
  V dh0_{}, a_{}, b_{}, last_pop_{};
  int64_t four_ulp_shift_ = 0;
  bool negate_ = false, exhausted_ = false, r_in_pool_ = false, r_done_ = false;
  bool has_last_pop_ = false;
  uint64_t spills_ = 0;
};

template <class Backend>
std::unique_ptr<DivStream<Backend>> div(const Backend& be, StreamPtr<Backend> r,
                                        std::vector<typename Backend::value_type> d,
                                        Instrumentation* instr, DivOptions options = {}) {
  return std::make_unique<DivStream<Backend>>(be, std::move(r), std::move(d), instr, options);
}

// --- Consumers -----------------------------------------------------------------

template <class V>
struct RoundedResult {
  std::vector<V> components;
  // Certified bound on |exact - sum(components)|; nullopt if the stream
  // froze before it could bound its tail.
  std::optional<ExactRational> bound;
  bool exhausted = false;
  bool frozen = false;
};

// Pulls until the stream's certified tail bound meets `target`, or the stream
// ends (bound 0). Throws DomainError after `max_pulls` pulls.
template <class Backend>
RoundedResult<typename Backend::value_type> round_result(Stream<Backend>& s,
                                                         const ExactRational& target,
                                                         size_t max_pulls = 1u << 16) {
  RoundedResult<typename Backend::value_type> r;
  StreamItem<typename Backend::value_type> it;
  for (size_t pulls = 0;; ++pulls) {
    auto tb = s.tail_bound();
    if (tb && *tb <= target) {
      r.bound = tb;
      return r;
    }
    if (pulls == max_pulls) throw DomainError("round_result: target not reached");
    switch (s.pull(&it)) {
      case PullStatus::kItem: r.components.push_back(std::move(it.value)); break;
      case PullStatus::kExhausted:
        r.exhausted = true;
        r.bound = ExactRational();
        return r;
      case PullStatus::kFrozen:
        r.frozen = true;
        r.bound = tb;
        return r;
    }
  }
}

// Sign of the exact value of a stream: pulls until the partial sum dominates
// the tail bound, or the stream ends. Returns -1, 0 or 1; throws
// DomainError when the stream freezes.
template <class Backend>
int stream_sign(const Backend& be, Stream<Backend>& s, size_t* pulls_out = nullptr) {
  ExactRational partial;
  StreamItem<typename Backend::value_type> it;
  size_t pulls = 0;
  for (;;) {
    auto tb = s.tail_bound();
    if (tb && !partial.is_zero() && partial.abs() > *tb) break;
    PullStatus st = s.pull(&it);
    if (st == PullStatus::kFrozen) throw DomainError("stream_sign: stream is frozen");
    if (st == PullStatus::kExhausted) break;
    partial += be.to_rational(it.value);
    ++pulls;
  }
  if (pulls_out) *pulls_out = pulls;
  return partial.sign();
}

// Drains a stream completely.
template <class Backend>
std::vector<typename Backend::value_type> drain(Stream<Backend>& s) {
  std::vector<typename Backend::value_type> out;
  StreamItem<typename Backend::value_type> it;
  for (;;) {
    PullStatus st = s.pull(&it);
    if (st == PullStatus::kFrozen) throw DomainError("drain: stream is frozen");
    if (st == PullStatus::kExhausted) return out;
    out.push_back(std::move(it.value));
  }
}

}  // namespace adapt

#endif  // ADAPT_ARITH_HPP_
