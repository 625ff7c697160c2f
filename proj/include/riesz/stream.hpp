#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

namespace riesz {

/// Memoized lazily generated sequence.
///
/// Copies share the cache.  Elements are produced in index order under a
/// (recursive) mutex, so concurrent readers see each element computed
/// exactly once and a generator may consult earlier elements of its own
/// stream.
/// A generator may end the sequence by returning nullopt; every later index
/// is then absent too.
template <class T>
class LazyStream {
 public:
  using Generator = std::function<std::optional<T>(std::size_t)>;

  LazyStream() : state_(std::make_shared<State>()) {}
  explicit LazyStream(Generator gen) : state_(std::make_shared<State>()) {
    state_->gen = std::move(gen);
  }

  /// Wraps a total generator.
  static LazyStream infinite(std::function<T(std::size_t)> gen) {
    return LazyStream([g = std::move(gen)](std::size_t n) -> std::optional<T> { return g(n); });
  }

  /// nullptr when the sequence ended before n.  The returned reference stays
  /// valid for the lifetime of the stream.
  const T* get(std::size_t n) const {
    std::lock_guard lock(state_->mutex);
    while (state_->cache.size() <= n && !state_->ended) {
      std::size_t next = state_->cache.size();
      auto v = state_->gen ? state_->gen(next) : std::nullopt;
      if (!v) {
        state_->ended = true;
        break;
      }
      state_->cache.push_back(std::make_unique<T>(std::move(*v)));
    }
    return n < state_->cache.size() ? state_->cache[n].get() : nullptr;
  }

  const T& at(std::size_t n) const {
    const T* p = get(n);
    if (!p) throw std::out_of_range("lazy stream ended before requested index");
    return *p;
  }

  std::size_t computed() const {
    std::lock_guard lock(state_->mutex);
    return state_->cache.size();
  }

 private:
  struct State {
    Generator gen;
    std::recursive_mutex mutex;
    std::vector<std::unique_ptr<T>> cache;
    bool ended = false;
  };
  std::shared_ptr<State> state_;
};

}  // namespace riesz
