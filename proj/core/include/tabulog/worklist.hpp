#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_set>
#include <utility>
#include <vector>

namespace tabulog {

enum class batch_kind : std::uint8_t { answers, dependencies };

// Double-ended batch list that pairs answers with dependencies exactly once.
//
// The order invariant: an answer batch sits to the left of a dependency
// batch exactly when the two have not been combined yet. New answers enter
// on the left, new dependencies on the right, so both start uncombined with
// everything present; get_work combines the leftmost adjacent
// (answers, dependencies) pair and swaps the two batches, recording the
// combination in the order itself. Batches stay homogeneous and two
// same-kind batches are never merged.
//
// An insertion extends the end batch only while that batch has not been
// swapped away from its end; since a swap can only move an answer batch
// rightwards (and a dependency batch leftwards), "the left end batch holds
// answers" is exactly "that batch is still in its insertion window", and
// symmetrically on the right.
template <class A, class D>
class local_worklist {
 public:
  struct batch {
    batch_kind kind;
    std::vector<A> answers;
    std::vector<D> dependencies;
  };

  void add_answer(A a) {
    if (!batches_.empty() && batches_.front().kind == batch_kind::answers) {
      batches_.front().answers.push_back(std::move(a));
      return;
    }
    batch b{batch_kind::answers, {}, {}};
    b.answers.push_back(std::move(a));
    batches_.push_front(std::move(b));
  }

  void add_dependency(D d) {
    if (!batches_.empty() &&
        batches_.back().kind == batch_kind::dependencies) {
      batches_.back().dependencies.push_back(std::move(d));
      return;
    }
    batch b{batch_kind::dependencies, {}, {}};
    b.dependencies.push_back(std::move(d));
    batches_.push_back(std::move(b));
  }

  // Combines the leftmost adjacent (answers, dependencies) batch pair:
  // swaps them in place and returns copies of both item lists. Empty when
  // every dependency batch is left of every answer batch, i.e. everything
  // has been combined.
  std::optional<std::pair<std::vector<A>, std::vector<D>>> get_work() {
    for (std::size_t i = 0; i + 1 < batches_.size(); ++i) {
      if (batches_[i].kind == batch_kind::answers &&
          batches_[i + 1].kind == batch_kind::dependencies) {
        std::swap(batches_[i], batches_[i + 1]);
        return std::make_pair(batches_[i + 1].answers,
                              batches_[i].dependencies);
      }
    }
    return std::nullopt;
  }

  std::size_t batch_count() const { return batches_.size(); }
  const batch& batch_at(std::size_t i) const { return batches_[i]; }
  bool empty() const { return batches_.empty(); }
  void clear() { batches_.clear(); }

 private:
  std::deque<batch> batches_;
};

// FIFO queue with at-most-once membership: pushing an already queued item
// is a no-op.
template <class T>
class global_worklist {
 public:
  bool push(T item) {
    if (queued_.contains(item)) return false;
    queued_.insert(item);
    queue_.push_back(std::move(item));
    return true;
  }

  std::optional<T> pop() {
    if (queue_.empty()) return std::nullopt;
    T item = std::move(queue_.front());
    queue_.pop_front();
    queued_.erase(item);
    return item;
  }

  bool empty() const { return queue_.empty(); }
  std::size_t size() const { return queue_.size(); }
  void clear() {
    queue_.clear();
    queued_.clear();
  }

 private:
  std::deque<T> queue_;
  std::unordered_set<T> queued_;
};

}  // namespace tabulog
