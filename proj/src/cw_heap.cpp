#include "cws/cw_heap.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace cws {

std::size_t ceil_log2(std::size_t x) {
  if (x <= 1) return 0;
  return static_cast<std::size_t>(std::bit_width(x - 1));
}

// ---------------------------------------------------------------------------
// ActiveIntervals

bool ActiveIntervals::inside(const Interval& iv, const HeapKey& k) {
  if (key_less(k, iv.lo.key) || (iv.lo.open && k == iv.lo.key)) return false;
  if (key_less(iv.hi.key, k) || (iv.hi.open && k == iv.hi.key)) return false;
  return true;
}

std::size_t ActiveIntervals::find(const HeapKey& k) const {
  // Last interval whose lower key is <= k.
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), k,
                             [](const HeapKey& key, const Interval& iv) {
                               return key_less(key, iv.lo.key);
                             });
  if (it == intervals_.begin()) return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(it - intervals_.begin()) - 1;
}

void ActiveIntervals::open(const HeapKey& anchor) {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), anchor,
                             [](const HeapKey& key, const Interval& iv) {
                               return key_less(key, iv.lo.key);
                             });
  intervals_.insert(it, Interval{{anchor, false}, {anchor, false}});
}

void ActiveIntervals::extend(const HeapKey& anchor, const HeapKey& to) {
  const std::size_t i = find(anchor);
  if (i >= intervals_.size()) return;
  Interval& iv = intervals_[i];
  if (key_less(to, iv.lo.key)) iv.lo = {to, false};
  else if (key_less(iv.hi.key, to)) iv.hi = {to, false};
}

bool ActiveIntervals::contains(const HeapKey& k) const {
  const std::size_t i = find(k);
  return i < intervals_.size() && inside(intervals_[i], k);
}

void ActiveIntervals::on_extract(const HeapKey& k, HeapOrder o) {
  const std::size_t i = find(k);
  if (i >= intervals_.size() || !inside(intervals_[i], k)) return;
  Interval& iv = intervals_[i];
  if (o == HeapOrder::descending) {
    if (k == iv.lo.key) {
      intervals_.erase(intervals_.begin() + static_cast<std::ptrdiff_t>(i));
      return;
    }
    iv.hi = {k, true};
  } else {
    if (k == iv.hi.key) {
      intervals_.erase(intervals_.begin() + static_cast<std::ptrdiff_t>(i));
      return;
    }
    iv.lo = {k, true};
  }
}

// ---------------------------------------------------------------------------
// CwHeap

namespace {
// The heap object's own fields count as workspace.
constexpr std::size_t kHeapScalarWords = WorkspaceBudget::words_for_bytes(sizeof(CwHeap));
}  // namespace

CwHeap::CwHeap(const ReadOnlyArray& input, std::size_t offset, std::size_t length,
               std::size_t s, HeapOrder order, AlivePredicate alive,
               WorkspaceBudget* budget)
    : input_(&input),
      offset_(offset),
      length_(length),
      order_(order),
      alive_(alive),
      level_offset_(Metered<std::uint32_t>(budget)),
      level_width_(Metered<std::uint8_t>(budget)),
      bits_(Metered<std::uint64_t>(budget)),
      scalars_(budget, kHeapScalarWords) {
  const std::size_t n = std::max<std::size_t>(input.size(), 2);
  index_bits_ = std::max<std::size_t>(ceil_log2(n), 1);
  const std::size_t target =
      std::max<std::size_t>(1, std::min(length, std::max<std::size_t>(s, 1) * index_bits_));
  buckets_ = std::bit_floor(target);
  height_ = static_cast<std::size_t>(std::countr_zero(buckets_));
  bucket_size_ = length == 0 ? 1 : (length + buckets_ - 1) / buckets_;

  level_offset_.resize(height_ + 1);
  level_width_.resize(height_ + 1);
  std::size_t total = 0;
  for (std::size_t h = 1; h <= height_; ++h) {
    std::size_t w;
    if (direct(h)) {
      w = std::max<std::size_t>(ceil_log2(bucket_size_ << h), 1);
    } else {
      w = 2 * h;
    }
    level_offset_[h] = static_cast<std::uint32_t>(total);
    level_width_[h] = static_cast<std::uint8_t>(w);
    total += w * (buckets_ >> h);
  }
  total_bits_ = total;
  bits_.assign((total + 63) / 64, 0);

  // Bottom-up; each level rescans only the quantiles named by the level
  // below, so the whole build costs O(length) reads.
  for (std::size_t h = 1; h <= height_; ++h) {
    for (std::size_t j = 0; j < (buckets_ >> h); ++j) {
      const auto best = better(node_best(h - 1, 2 * j), node_best(h - 1, 2 * j + 1));
      if (best) encode(h, j, *best);
    }
  }
  top_ = node_best(height_, 0);
}

CwHeap::CwHeap(const CwHeap& o)
    : input_(o.input_),
      offset_(o.offset_),
      length_(o.length_),
      order_(o.order_),
      alive_(o.alive_),
      buckets_(o.buckets_),
      bucket_size_(o.bucket_size_),
      height_(o.height_),
      index_bits_(o.index_bits_),
      total_bits_(o.total_bits_),
      top_(o.top_),
      level_offset_(o.level_offset_),
      level_width_(o.level_width_),
      bits_(o.bits_),
      scalars_(o.bits_.get_allocator().budget(), kHeapScalarWords) {}

std::size_t CwHeap::quantiles(std::size_t h) const {
  return std::min<std::size_t>(std::size_t{1} << h, bucket_size_);
}

std::size_t CwHeap::quantile_size(std::size_t h) const {
  const std::size_t q = quantiles(h);
  return (bucket_size_ + q - 1) / q;
}

std::uint64_t CwHeap::get_field(std::size_t h, std::size_t j) const {
  const std::size_t w = level_width_[h];
  const std::size_t pos = level_offset_[h] + j * w;
  const std::size_t word = pos / 64, bit = pos % 64;
  std::uint64_t v = bits_[word] >> bit;
  if (bit + w > 64) v |= bits_[word + 1] << (64 - bit);
  return w == 64 ? v : v & ((std::uint64_t{1} << w) - 1);
}

void CwHeap::set_field(std::size_t h, std::size_t j, std::uint64_t v) {
  const std::size_t w = level_width_[h];
  const std::size_t pos = level_offset_[h] + j * w;
  const std::size_t word = pos / 64, bit = pos % 64;
  const std::uint64_t mask = w == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << w) - 1;
  bits_[word] = (bits_[word] & ~(mask << bit)) | ((v & mask) << bit);
  if (bit + w > 64) {
    const std::size_t spill = bit + w - 64;
    const std::uint64_t hi_mask = (std::uint64_t{1} << spill) - 1;
    bits_[word + 1] = (bits_[word + 1] & ~hi_mask) | ((v & mask) >> (64 - bit));
  }
}

CwHeap::Range CwHeap::bucket_range(std::size_t b) const {
  const std::size_t lo = std::min(length_, b * bucket_size_);
  const std::size_t hi = std::min(length_, lo + bucket_size_);
  return {lo, hi};
}

CwHeap::Range CwHeap::decode(std::size_t h, std::size_t j) const {
  const std::uint64_t f = get_field(h, j);
  const std::size_t first_bucket = j << h;
  if (direct(h)) {
    const std::size_t pos = first_bucket * bucket_size_ + static_cast<std::size_t>(f);
    if (pos >= length_) return {length_, length_};
    return {pos, pos + 1};
  }
  const std::size_t rel = static_cast<std::size_t>(f & ((std::uint64_t{1} << h) - 1));
  const std::size_t quant = static_cast<std::size_t>(f >> h);
  const Range b = bucket_range(first_bucket + rel);
  const std::size_t qs = quantile_size(h);
  const std::size_t lo = std::min(b.hi, b.lo + quant * qs);
  return {lo, std::min(b.hi, lo + qs)};
}

void CwHeap::encode(std::size_t h, std::size_t j, const HeapKey& k) {
  const std::size_t pos = k.idx - offset_;
  const std::size_t first_bucket = j << h;
  if (direct(h)) {
    set_field(h, j, pos - first_bucket * bucket_size_);
    return;
  }
  const std::size_t b = pos / bucket_size_;
  const std::size_t within = pos - b * bucket_size_;
  const std::size_t quant = within / quantile_size(h);
  set_field(h, j, (b - first_bucket) | (quant << h));
}

std::optional<HeapKey> CwHeap::scan(Range r) const {
  std::optional<HeapKey> best;
  for (std::size_t i = r.lo; i < r.hi; ++i) {
    const HeapKey k{(*input_)[offset_ + i], static_cast<std::uint32_t>(offset_ + i)};
    if (!alive_(k)) continue;
    if (!best || key_before(k, *best, order_)) best = k;
  }
  return best;
}

std::optional<HeapKey> CwHeap::node_best(std::size_t h, std::size_t j) const {
  if (h == 0) return scan(bucket_range(j));
  return scan(decode(h, j));
}

const std::optional<HeapKey>& CwHeap::better(const std::optional<HeapKey>& a,
                                             const std::optional<HeapKey>& b) const {
  if (!a) return b;
  if (!b) return a;
  return key_before(*b, *a, order_) ? b : a;
}

std::optional<HeapKey> CwHeap::exhaustive_best(std::size_t h, std::size_t j) const {
  const auto pts = input_->unmetered();
  const std::size_t lo = std::min(length_, (j << h) * bucket_size_);
  const std::size_t hi = std::min(length_, ((j + 1) << h) * bucket_size_);
  std::optional<HeapKey> best;
  for (std::size_t i = lo; i < hi; ++i) {
    const HeapKey k{pts[offset_ + i], static_cast<std::uint32_t>(offset_ + i)};
    if (!alive_(k)) continue;
    if (!best || key_before(k, *best, order_)) best = k;
  }
  return best;
}

std::optional<HeapKey> CwHeap::extract() {
  if (!top_) return std::nullopt;
  const HeapKey x = *top_;
  alive_.on_extract(x, order_);
  const std::size_t b = (x.idx - offset_) / bucket_size_;
  std::optional<HeapKey> cur = scan(bucket_range(b));
  for (std::size_t h = 1; h <= height_; ++h) {
    const std::size_t sibling = (b >> (h - 1)) ^ 1;
    const auto other = node_best(h - 1, sibling);
    cur = better(cur, other);
    if (cur) encode(h, b >> h, *cur);
  }
  top_ = cur;
  return x;
}

void CwHeap::insert(std::size_t index) {
  const HeapKey k{(*input_)[index], static_cast<std::uint32_t>(index)};
  const std::size_t b = (index - offset_) / bucket_size_;
  for (std::size_t h = 1; h <= height_; ++h) {
    const auto existing = node_best(h, b >> h);
    if (existing && key_before(*existing, k, order_)) return;
    encode(h, b >> h, k);
  }
  if (!top_ || key_before(k, *top_, order_)) top_ = k;
}

}  // namespace cws
