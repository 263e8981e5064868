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

// Pull-driven stream stages: merge queue (MQ), priority queue (PQ),
// partial-product generator (PP) and the insert-and-sum operator (Sigma3).
//
// A stream yields floats most significant first. Every item carries the
// amplitude of the representation the downstream stages may rely on, which
// is not always the canonical one. A pull either yields an item, reports
// that the producer is frozen waiting for input, or reports exhaustion.
// Each stage can also bound the exact sum of everything it has not yet
// yielded; that bound is what adaptive consumers compare to their target.

#ifndef ADAPT_TOOLSET_HPP_
#define ADAPT_TOOLSET_HPP_

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "adapt/backend.hpp"

namespace adapt {

enum class PullStatus { kItem, kFrozen, kExhausted };
enum class KeyPolicy { kMagnitude, kAmplitude };

template <class V>
struct StreamItem {
  V value;
  int64_t amplitude = kZeroAmplitude;
};

// Firing counters and the optional trace sink shared by a pipeline.
class Instrumentation {
 public:
  void fire(const std::string& stage) {
    ++counts_[stage];
    ++total_;
  }
  void bump(const std::string& counter) { ++counts_[counter]; }
  uint64_t count(const std::string& stage) const {
    auto it = counts_.find(stage);
    return it == counts_.end() ? 0 : it->second;
  }
  // Sum of stage firings (counters bumped with bump() are excluded).
  uint64_t total() const { return total_; }
  const std::map<std::string, uint64_t>& counts() const { return counts_; }

  void set_trace(std::function<void(const std::string&)> sink) { sink_ = std::move(sink); }
  bool tracing() const { return static_cast<bool>(sink_); }
  void trace(const std::string& line) const {
    if (sink_) sink_(line);
  }

 private:
  std::map<std::string, uint64_t> counts_;
  uint64_t total_ = 0;
  std::function<void(const std::string&)> sink_;
};

template <class Backend>
class Stream {
 public:
  using V = typename Backend::value_type;
  using Item = StreamItem<V>;

  virtual ~Stream() = default;
  virtual PullStatus pull(Item* out) = 0;
  // Bound on |exact sum of the items not yet pulled|; nullopt when the
  // producer cannot bound its future (an open push source).
  virtual std::optional<ExactRational> tail_bound() const = 0;
  // While frozen, a stream may promise that every future item has an
  // amplitude at most this value.
  virtual std::optional<int64_t> amplitude_ceiling() const { return std::nullopt; }
};

template <class Backend>
using StreamPtr = std::unique_ptr<Stream<Backend>>;

namespace internal {

inline std::optional<ExactRational> AddBounds(const std::optional<ExactRational>& x,
                                              const std::optional<ExactRational>& y) {
  if (!x || !y) return std::nullopt;
  return *x + *y;
}

template <class Backend>
int64_t AmplitudeOf(const Backend& be, const StreamItem<typename Backend::value_type>& x) {
  return be.is_zero(x.value) ? kZeroAmplitude : x.amplitude;
}

template <class Backend>
std::string ItemText(const Backend& be, const std::optional<StreamItem<typename Backend::value_type>>& x) {
  if (!x) return "-";
  return be.to_text(x->value);
}

}  // namespace internal

// The comparison key of an item as an exact rational: |value| or beta^amplitude.
template <class Backend>
ExactRational key_of(const Backend& be, const StreamItem<typename Backend::value_type>& item,
                     KeyPolicy policy) {
  if (policy == KeyPolicy::kMagnitude) return be.to_rational(item.value).abs();
  return ExactRational::Power(be.format().beta(), internal::AmplitudeOf(be, item));
}

template <class Backend>
int compare_keys(const Backend& be, const StreamItem<typename Backend::value_type>& x,
                 const StreamItem<typename Backend::value_type>& y, KeyPolicy policy) {
  if (policy == KeyPolicy::kMagnitude) return be.compare_magnitude(x.value, y.value);
  int64_t ex = internal::AmplitudeOf(be, x), ey = internal::AmplitudeOf(be, y);
  return (ex > ey) - (ex < ey);
}

// --- Sources ---------------------------------------------------------------

// A materialized list of components. Zeros are skipped; amplitudes are
// canonical.
template <class Backend>
class VectorSource : public Stream<Backend> {
 public:
  using V = typename Backend::value_type;
  using Item = StreamItem<V>;

  VectorSource(Backend be, std::vector<V> values) : be_(std::move(be)) {
    for (V& v : values)
      if (!be_.is_zero(v)) values_.push_back(std::move(v));
    suffix_.assign(values_.size() + 1, ExactRational());
    for (size_t i = values_.size(); i-- > 0;)
      suffix_[i] = suffix_[i + 1] + be_.to_rational(values_[i]).abs();
  }

  PullStatus pull(Item* out) override {
    if (next_ == values_.size()) return PullStatus::kExhausted;
    out->value = values_[next_];
    out->amplitude = be_.canonical_exponent(values_[next_]);
    ++next_;
    return PullStatus::kItem;
  }
  std::optional<ExactRational> tail_bound() const override { return suffix_[next_]; }

 private:
  Backend be_;
  std::vector<V> values_;
  std::vector<ExactRational> suffix_;
  size_t next_ = 0;
};

// A channel fed by the caller; frozen while open and empty.
template <class Backend>
class PushSource : public Stream<Backend> {
 public:
  using V = typename Backend::value_type;
  using Item = StreamItem<V>;

  explicit PushSource(Backend be) : be_(std::move(be)) {}

  void push(V v) {
    if (closed_) throw std::logic_error("push on a closed source");
    if (!be_.is_zero(v)) queue_.push_back(std::move(v));
  }
  void close() { closed_ = true; }

  PullStatus pull(Item* out) override {
    if (queue_.empty()) return closed_ ? PullStatus::kExhausted : PullStatus::kFrozen;
    out->value = std::move(queue_.front());
    out->amplitude = be_.canonical_exponent(out->value);
    queue_.pop_front();
    return PullStatus::kItem;
  }
  std::optional<ExactRational> tail_bound() const override {
    if (!closed_) return std::nullopt;
    ExactRational sum;
    for (const V& v : queue_) sum += be_.to_rational(v).abs();
    return sum;
  }

 private:
  Backend be_;
  std::deque<V> queue_;
  bool closed_ = false;
};

// --- MQ ----------------------------------------------------------------------

// Merges two key-descending streams. Fires only with a head on both inputs,
// or when one input is finished, or when the frozen input promises that its
// future items rank below the other head. Ties go to the first input.
template <class Backend>
class MergeQueue : public Stream<Backend> {
 public:
  using V = typename Backend::value_type;
  using Item = StreamItem<V>;

  MergeQueue(Backend be, StreamPtr<Backend> s1, StreamPtr<Backend> s2, KeyPolicy policy,
             Instrumentation* instr, std::string name = "mq")
      : be_(std::move(be)), policy_(policy), instr_(instr), name_(std::move(name)) {
    in_[0].src = std::move(s1);
    in_[1].src = std::move(s2);
  }

  PullStatus pull(Item* out) override {
    bool frozen[2] = {false, false};
    for (int k = 0; k < 2; ++k) {
      Input& in = in_[k];
      if (in.head || in.done) continue;
      Item it;
      switch (in.src->pull(&it)) {
        case PullStatus::kItem: in.head = std::move(it); break;
        case PullStatus::kExhausted: in.done = true; break;
        case PullStatus::kFrozen: frozen[k] = true; break;
      }
    }
    int pick = -1;
    if (in_[0].head && in_[1].head) {
      pick = compare_keys(be_, *in_[0].head, *in_[1].head, policy_) >= 0 ? 0 : 1;
    } else if (in_[0].head && (in_[1].done || (frozen[1] && Outranks(0, 1)))) {
      pick = 0;
    } else if (in_[1].head && (in_[0].done || (frozen[0] && Outranks(1, 0)))) {
      pick = 1;
    } else if (in_[0].done && in_[1].done) {
      return PullStatus::kExhausted;
    }
    if (pick < 0) return PullStatus::kFrozen;
    *out = std::move(*in_[pick].head);
    in_[pick].head.reset();
    if (instr_) {
      instr_->fire(name_);
      if (instr_->tracing())
        instr_->trace("stage=" + name_ + " in=" + be_.to_text(out->value) + " out=" +
                      be_.to_text(out->value) + " state=" +
                      internal::ItemText(be_, in_[1 - pick].head) + ",-");
    }
    return PullStatus::kItem;
  }

  std::optional<ExactRational> tail_bound() const override {
    std::optional<ExactRational> sum = ExactRational();
    for (const Input& in : in_) {
      if (in.head) sum = internal::AddBounds(sum, be_.to_rational(in.head->value).abs());
      if (!in.done) sum = internal::AddBounds(sum, in.src->tail_bound());
    }
    return sum;
  }

  std::optional<int64_t> amplitude_ceiling() const override {
    int64_t c = std::numeric_limits<int64_t>::min();
    for (const Input& in : in_) {
      if (in.head) c = std::max(c, internal::AmplitudeOf(be_, *in.head));
      if (!in.done) {
        auto sc = in.src->amplitude_ceiling();
        if (!sc) return std::nullopt;
        c = std::max(c, *sc);
      }
    }
    return c;
  }

 private:
  struct Input {
    StreamPtr<Backend> src;
    std::optional<Item> head;
    bool done = false;
  };

  // Whether the head of input k ranks strictly above (or, for the first
  // input, not below) everything the frozen input j may still produce.
  bool Outranks(int k, int j) const {
    if (policy_ != KeyPolicy::kAmplitude) return false;
    auto ceiling = in_[j].src->amplitude_ceiling();
    if (!ceiling) return false;
    int64_t e = internal::AmplitudeOf(be_, *in_[k].head);
    return k == 0 ? e >= *ceiling : e > *ceiling;
  }

  Backend be_;
  KeyPolicy policy_;
  Instrumentation* instr_;
  std::string name_;
  Input in_[2];
};

// Lowers each amplitude to the running minimum so that a magnitude-sorted
// stream becomes amplitude-sorted. Zeros are dropped.
template <class Backend>
class Rerepresent : public Stream<Backend> {
 public:
  using V = typename Backend::value_type;
  using Item = StreamItem<V>;

  Rerepresent(Backend be, StreamPtr<Backend> src, Instrumentation* instr)
      : be_(std::move(be)), src_(std::move(src)), instr_(instr) {}

  PullStatus pull(Item* out) override {
    for (;;) {
      PullStatus st = src_->pull(out);
      if (st != PullStatus::kItem) return st;
      if (be_.is_zero(out->value)) continue;
      int64_t e = std::min(be_.canonical_exponent(out->value), running_min_);
      if (!be_.representable_at(out->value, e))
        throw DomainError("rerepresent: input is not sorted by magnitude");
      running_min_ = e;
      out->amplitude = e;
      if (instr_) instr_->fire("rerep");
      return st;
    }
  }
  std::optional<ExactRational> tail_bound() const override { return src_->tail_bound(); }
  std::optional<int64_t> amplitude_ceiling() const override {
    auto c = src_->amplitude_ceiling();
    if (!c) return c;
    return std::min(*c, running_min_);
  }

 private:
  Backend be_;
  StreamPtr<Backend> src_;
  Instrumentation* instr_;
  int64_t running_min_ = kZeroAmplitude;
};

// --- PQ ----------------------------------------------------------------------

// Binary max-heap. `Less(x, y)` orders keys; ops() counts sift steps.
template <class T, class Less>
class PriorityQueue {
 public:
  explicit PriorityQueue(Less less = Less()) : less_(std::move(less)) {}

  bool empty() const { return heap_.empty(); }
  size_t size() const { return heap_.size(); }
  uint64_t ops() const { return ops_; }

  void insert(T item) {
    heap_.push_back(std::move(item));
    SiftUp(heap_.size() - 1);
  }
  const T& top() const {
    if (heap_.empty()) throw std::out_of_range("priority queue is empty");
    return heap_.front();
  }
  T pop_max() {
    if (heap_.empty()) throw std::out_of_range("pop on empty priority queue");
    T out = std::move(heap_.front());
    heap_.front() = std::move(heap_.back());
    heap_.pop_back();
    if (!heap_.empty()) SiftDown(0);
    return out;
  }
  // Replaces the maximum with `item` and restores the heap.
  void update_top(T item) {
    if (heap_.empty()) throw std::out_of_range("update on empty priority queue");
    heap_.front() = std::move(item);
    SiftDown(0);
  }
  template <class F>
  void for_each(F f) const {
    for (const T& t : heap_) f(t);
  }

 private:
  void SiftUp(size_t i) {
    while (i > 0) {
      size_t parent = (i - 1) / 2;
      ++ops_;
      if (!less_(heap_[parent], heap_[i])) break;
      std::swap(heap_[parent], heap_[i]);
      i = parent;
    }
  }
  void SiftDown(size_t i) {
    for (;;) {
      size_t l = 2 * i + 1, r = l + 1, best = i;
      if (l < heap_.size() && less_(heap_[best], heap_[l])) best = l;
      if (r < heap_.size() && less_(heap_[best], heap_[r])) best = r;
      ++ops_;
      if (best == i) break;
      std::swap(heap_[i], heap_[best]);
      i = best;
    }
  }

  std::vector<T> heap_;
  Less less_;
  uint64_t ops_ = 0;
};

// --- Sigma3 ------------------------------------------------------------------

template <class V>
struct ThreeSumState {
  StreamItem<V> a;
  StreamItem<V> b;
};

template <class V>
struct Sigma3Result {
  ThreeSumState<V> state;
  std::optional<StreamItem<V>> emitted;
  bool early = false;
};

// One insertion: (u, v) = b + c, (a', w) = a + u, (b', c') = w + v, all
// exact. Emits a' when c' != 0. The three-operation sums are used when the
// early-exit test allows them.
template <class Backend>
Sigma3Result<typename Backend::value_type> sigma3_step(
    const Backend& be, const ThreeSumState<typename Backend::value_type>& s,
    const StreamItem<typename Backend::value_type>& c) {
  using V = typename Backend::value_type;
  using Item = StreamItem<V>;
  auto amp = [&](const Item& x) { return internal::AmplitudeOf(be, x); };
  // Zeros are representable at every amplitude and take no part in the
  // ordering requirement.
  const bool za = be.is_zero(s.a.value), zb = be.is_zero(s.b.value), zc = be.is_zero(c.value);
  const int64_t ea = amp(s.a), eb = amp(s.b), ec = amp(c);
  if ((!za && !zb && ea < eb) || (!zb && !zc && eb < ec) || (!za && !zc && ea < ec))
    throw DomainError("sigma3_step: requires e_a >= e_b >= e_c");

  Sigma3Result<V> r;
  r.early = za || zb || zc || be.early_exit(s.b.value, eb, ea, ec);
  auto sum = [&](const Item& x, const Item& y) {
    int64_t ex = amp(x), ey = amp(y);
    int64_t low = std::min(ex, ey);
    EftPair<V> p;
    if (be.is_zero(x.value) || be.is_zero(y.value)) {
      p = {be.is_zero(x.value) ? y.value : x.value, V()};
    } else {
      p = r.early ? be.fast_two_sum(x.value, ex, y.value, ey) : be.two_sum(x.value, y.value);
    }
    Item hi{std::move(p.hi), kZeroAmplitude}, lo{std::move(p.lo), kZeroAmplitude};
    if (!be.is_zero(hi.value)) hi.amplitude = std::max(be.canonical_exponent(hi.value), low);
    if (!be.is_zero(lo.value)) lo.amplitude = low;
    return std::pair<Item, Item>(std::move(hi), std::move(lo));
  };
  auto [u, v] = sum(s.b, c);
  auto [a1, w] = sum(s.a, u);
  auto [b1, c1] = sum(w, v);
  if (be.is_zero(c1.value)) {
    r.state = {std::move(a1), std::move(b1)};
  } else {
    r.emitted = std::move(a1);
    r.state = {std::move(b1), std::move(c1)};
  }
  // The tracked amplitudes are valid but may need lowering to keep the
  // state ordered; lowering never goes under the canonical amplitude.
  Item& x = r.state.a;
  Item& y = r.state.b;
  if (!be.is_zero(x.value) && !be.is_zero(y.value) && amp(x) < amp(y)) {
    int64_t e = std::max(be.canonical_exponent(y.value), amp(x));
    if (e > amp(x)) throw std::logic_error("sigma3_step: state amplitudes out of order");
    y.amplitude = e;
  }
  return r;
}

// The Sigma3 stage: absorbs an amplitude-sorted stream and emits the sum
// most significant first. At end of input the two residuals are flushed
// through one more exact sum so that at most two nonzero items follow.
template <class Backend>
class Sigma3 : public Stream<Backend> {
 public:
  using V = typename Backend::value_type;
  using Item = StreamItem<V>;

  Sigma3(Backend be, StreamPtr<Backend> src, Instrumentation* instr, std::string name = "sigma3")
      : be_(std::move(be)), src_(std::move(src)), instr_(instr), name_(std::move(name)) {
    state_.a.value = V();
    state_.b.value = V();
  }

  PullStatus pull(Item* out) override {
    if (!done_) {
      Item c;
      for (;;) {
        PullStatus st = src_->pull(&c);
        if (st == PullStatus::kFrozen) return st;
        if (st == PullStatus::kExhausted) {
          Flush();
          break;
        }
        auto r = sigma3_step(be_, state_, c);
        if (instr_) {
          instr_->fire(name_);
          if (r.early) instr_->bump(name_ + ".early");
          if (instr_->tracing())
            instr_->trace("stage=" + name_ + " in=" + be_.to_text(c.value) +
                          " out=" + internal::ItemText(be_, r.emitted) + " state=" +
                          be_.to_text(r.state.a.value) + "," + be_.to_text(r.state.b.value));
        }
        state_ = std::move(r.state);
        if (r.emitted) {
          *out = std::move(*r.emitted);
          return PullStatus::kItem;
        }
      }
    }
    if (flushed_.empty()) return PullStatus::kExhausted;
    *out = std::move(flushed_.front());
    flushed_.pop_front();
    return PullStatus::kItem;
  }

  std::optional<ExactRational> tail_bound() const override {
    ExactRational pending = be_.to_rational(state_.a.value) + be_.to_rational(state_.b.value);
    for (const Item& f : flushed_) pending += be_.to_rational(f.value);
    if (done_) return pending.abs();
    return internal::AddBounds(pending.abs(), src_->tail_bound());
  }

  const ThreeSumState<V>& state() const { return state_; }

 private:
  void Flush() {
    done_ = true;
    auto [hi, lo] = be_.two_sum(state_.a.value, state_.b.value);
    for (V* v : {&hi, &lo})
      if (!be_.is_zero(*v)) flushed_.push_back(Item{*v, be_.canonical_exponent(*v)});
    state_.a.value = V();
    state_.b.value = V();
    if (instr_) {
      instr_->fire(name_ + ".flush");
      if (instr_->tracing())
        instr_->trace("stage=" + name_ + ".flush in=- out=" + be_.to_text(hi) + "," +
                      be_.to_text(lo) + " state=-");
    }
  }

  Backend be_;
  StreamPtr<Backend> src_;
  Instrumentation* instr_;
  std::string name_;
  ThreeSumState<V> state_;
  bool done_ = false;
  std::deque<Item> flushed_;
};

// --- PP ----------------------------------------------------------------------

struct PartialProductStats {
  size_t lo_high_water = 0;
  size_t b_count = 0;
  uint64_t pq_ops = 0;
};

namespace internal {

template <class Backend>
class PartialProductCore {
 public:
  using V = typename Backend::value_type;
  using Item = StreamItem<V>;

  PartialProductCore(Backend be, StreamPtr<Backend> a, StreamPtr<Backend> b,
                     Instrumentation* instr, PartialProductStats* stats)
      : be_(std::move(be)), instr_(instr), stats_(stats), pq_(EntryLess{&be_}) {
    in_[0].src = std::move(a);
    in_[1].src = std::move(b);
  }

  PullStatus pull_hi(Item* out) {
    if (finished_) return PullStatus::kExhausted;
    if (!started_) {
      Known k0 = Ensure(0, 0), k1 = Ensure(1, 0);
      if (k0 == Known::kFrozen || k1 == Known::kFrozen) return PullStatus::kFrozen;
      if (k0 == Known::kAbsent || k1 == Known::kAbsent) return Finish();
      started_ = true;
      pq_.insert(Make(0, 0));
      next_j_ = 1;
    }
    if (pq_.empty()) return Finish();
    const size_t i = pq_.top().i, j = pq_.top().j;
    // Freeze until the successors of the top entry are known.
    Known next_a = Ensure(0, i + 1);
    if (next_a == Known::kFrozen) return PullStatus::kFrozen;
    Known next_b = Known::kAbsent;
    if (i == 0) {
      next_b = Ensure(1, j + 1);
      if (next_b == Known::kFrozen) return PullStatus::kFrozen;
    }
    Entry e;
    if (next_a == Known::kPresent) {
      e = pq_.top();
      pq_.update_top(Make(i + 1, j));
    } else {
      e = pq_.pop_max();
    }
    if (next_b == Known::kPresent) {
      pq_.insert(Make(0, j + 1));
      next_j_ = j + 2;
    }
    if (has_last_ && be_.compare_magnitude(e.hi, last_hi_) > 0)
      throw std::logic_error("partial products out of order");
    last_hi_ = e.hi;
    has_last_ = true;
    last_hi_amp_ = be_.canonical_exponent(e.hi);
    if (!be_.is_zero(e.lo)) {
      lo_.push_back(Item{e.lo, last_hi_amp_ - be_.p()});
      if (stats_) stats_->lo_high_water = std::max(stats_->lo_high_water, lo_.size());
    }
    if (stats_) {
      stats_->b_count = in_[1].values.size();
      stats_->pq_ops = pq_.ops();
    }
    out->amplitude = last_hi_amp_;
    out->value = std::move(e.hi);
    if (instr_) {
      instr_->fire("pp");
      if (instr_->tracing())
        instr_->trace("stage=pp in=a" + std::to_string(i) + "*b" + std::to_string(j) +
                      " out=" + be_.to_text(out->value) + " state=" + std::to_string(pq_.size()) +
                      "," + std::to_string(lo_.size()));
    }
    return PullStatus::kItem;
  }

  PullStatus pull_lo(Item* out) {
    if (!lo_.empty()) {
      *out = std::move(lo_.front());
      lo_.pop_front();
      return PullStatus::kItem;
    }
    return finished_ ? PullStatus::kExhausted : PullStatus::kFrozen;
  }

  std::optional<int64_t> lo_ceiling() const {
    if (!has_last_) return std::nullopt;
    return last_hi_amp_ - be_.p();
  }

  // Bounds the exact sum of all products whose hi part is not yet emitted.
  std::optional<ExactRational> hi_tail_bound() const {
    if (finished_) return ExactRational();
    auto sa0 = SuffixBound(0, 0);
    if (!sa0) return std::nullopt;
    if (!started_) {
      auto sb = SuffixBound(1, 0);
      if (!sb) return std::nullopt;
      return *sa0 * *sb;
    }
    std::optional<ExactRational> sum = ExactRational();
    pq_.for_each([&](const Entry& e) {
      auto s = SuffixBound(0, e.i);
      sum = s && sum ? std::optional<ExactRational>(*sum + be_.to_rational(in_[1].values[e.j]).abs() * *s)
                     : std::nullopt;
    });
    auto sb = SuffixBound(1, next_j_);
    if (!sb || !sum) return std::nullopt;
    return *sum + *sb * *sa0;
  }

  ExactRational lo_tail_bound() const {
    ExactRational sum;
    for (const Item& x : lo_) sum += be_.to_rational(x.value).abs();
    return sum;
  }

 private:
  enum class Known { kPresent, kAbsent, kFrozen };

  struct Entry {
    size_t i = 0, j = 0;
    V hi{}, lo{};
  };
  struct EntryLess {
    const Backend* be;
    bool operator()(const Entry& x, const Entry& y) const {
      int c = be->compare_magnitude(x.hi, y.hi);
      if (c != 0) return c < 0;
      // Deterministic tie break: lower j first, then lower i.
      return x.j != y.j ? x.j > y.j : x.i > y.i;
    }
  };
  struct Input {
    StreamPtr<Backend> src;
    std::vector<V> values;
    std::vector<ExactRational> prefix{ExactRational()};  // prefix sums of values
    bool done = false;
  };

  Known Ensure(int k, size_t index) {
    Input& in = in_[k];
    while (in.values.size() <= index && !in.done) {
      Item it;
      PullStatus st = in.src->pull(&it);
      if (st == PullStatus::kFrozen) return Known::kFrozen;
      if (st == PullStatus::kExhausted) {
        in.done = true;
        break;
      }
      if (be_.is_zero(it.value)) continue;
      in.prefix.push_back(in.prefix.back() + be_.to_rational(it.value));
      in.values.push_back(std::move(it.value));
    }
    return in.values.size() > index ? Known::kPresent : Known::kAbsent;
  }

  // Bound on |sum of components index.. of input k|.
  std::optional<ExactRational> SuffixBound(int k, size_t index) const {
    const Input& in = in_[k];
    ExactRational known;
    if (index < in.values.size()) known = in.prefix.back() - in.prefix[index];
    if (in.done) return known.abs();
    return internal::AddBounds(known.abs(), in.src->tail_bound());
  }

  Entry Make(size_t i, size_t j) {
    auto p = be_.two_product(in_[0].values[i], in_[1].values[j]);
    return Entry{i, j, std::move(p.hi), std::move(p.lo)};
  }

  PullStatus Finish() {
    finished_ = true;
    return PullStatus::kExhausted;
  }

  Backend be_;
  Instrumentation* instr_;
  PartialProductStats* stats_;
  Input in_[2];
  PriorityQueue<Entry, EntryLess> pq_;
  std::deque<Item> lo_;
  size_t next_j_ = 0;
  bool started_ = false, finished_ = false, has_last_ = false;
  V last_hi_{};
  int64_t last_hi_amp_ = 0;
};

template <class Backend>
class PartialProductHi : public Stream<Backend> {
 public:
  explicit PartialProductHi(std::shared_ptr<PartialProductCore<Backend>> core)
      : core_(std::move(core)) {}
  PullStatus pull(typename Stream<Backend>::Item* out) override { return core_->pull_hi(out); }
  std::optional<ExactRational> tail_bound() const override { return core_->hi_tail_bound(); }

 private:
  std::shared_ptr<PartialProductCore<Backend>> core_;
};

template <class Backend>
class PartialProductLo : public Stream<Backend> {
 public:
  explicit PartialProductLo(std::shared_ptr<PartialProductCore<Backend>> core)
      : core_(std::move(core)) {}
  PullStatus pull(typename Stream<Backend>::Item* out) override { return core_->pull_lo(out); }
  std::optional<ExactRational> tail_bound() const override { return core_->lo_tail_bound(); }
  std::optional<int64_t> amplitude_ceiling() const override { return core_->lo_ceiling(); }

 private:
  std::shared_ptr<PartialProductCore<Backend>> core_;
};

}  // namespace internal

// The partial products of A and B: hi parts in descending magnitude, and
// the waiting queue of lo parts tagged with amplitude canonical(hi) - p.
// The hi stream's tail bound covers the exact value of every product not yet
// emitted; the lo stream's covers only the queued lo parts.
template <class Backend>
std::pair<StreamPtr<Backend>, StreamPtr<Backend>> pp_generate(
    const Backend& be, StreamPtr<Backend> a, StreamPtr<Backend> b, Instrumentation* instr,
    PartialProductStats* stats = nullptr) {
  auto core = std::make_shared<internal::PartialProductCore<Backend>>(be, std::move(a),
                                                                      std::move(b), instr, stats);
  return {std::make_unique<internal::PartialProductHi<Backend>>(core),
          std::make_unique<internal::PartialProductLo<Backend>>(core)};
}

}  // namespace adapt

#endif  // ADAPT_TOOLSET_HPP_
