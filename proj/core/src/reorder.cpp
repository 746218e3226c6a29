#include "osr/reorder.hpp"

#include <cassert>
#include <chrono>
#include <stdexcept>
#include <thread>

#include "osr/config.hpp"

namespace osr {

NonBlockingReorderer::NonBlockingReorderer(std::size_t capacity, ReorderSink sink)
    : mask_(capacity - 1), sink_(std::move(sink)) {
  if (!is_power_of_two(capacity))
    throw std::invalid_argument("reorder buffer capacity must be a power of two");
  slots_ = std::make_unique<std::atomic<OutputUnit*>[]>(capacity);
  for (std::size_t i = 0; i < capacity; ++i) slots_[i].store(nullptr, std::memory_order_relaxed);
}

NonBlockingReorderer::~NonBlockingReorderer() {
  for (std::size_t i = 0; i <= mask_; ++i) delete slots_[i].load(std::memory_order_relaxed);
}

bool NonBlockingReorderer::try_add(OutputUnit& u) {
  const Serial t = u.serial;
  const Serial n = next_.load(std::memory_order_acquire);
  if (t < n || t >= n + capacity()) return false;
  auto* cell = new OutputUnit(std::move(u));
  slots_[t & mask_].store(cell, std::memory_order_release);
  return true;
}

std::size_t NonBlockingReorderer::send_pending() {
  std::size_t emitted = 0;
  for (;;) {
    if (flag_.test_and_set(std::memory_order_acquire)) return emitted;
    std::size_t i;
    for (;;) {
      const Serial n = next_.load(std::memory_order_relaxed);
      i = static_cast<std::size_t>(n & mask_);
      OutputUnit* o = slots_[i].load(std::memory_order_acquire);
      if (o != nullptr) {
        sink_(std::move(*o));
        slots_[i].store(nullptr, std::memory_order_release);
        delete o;
        next_.fetch_add(1, std::memory_order_release);
        ++emitted;
      } else {
        flag_.clear(std::memory_order_release);
        break;
      }
    }
    // A unit for the current slot may have landed between the empty load
    // and the flag clear; re-check so it is not stranded.
    if (slots_[i].load(std::memory_order_acquire) == nullptr) return emitted;
  }
}

bool NonBlockingReorderer::send(OutputUnit& u) {
  const bool success = try_add(u);
  send_pending();
  return success;
}

void NonBlockingReorderer::submit(OutputUnit u) {
  int failures = 0;
  while (!send(u)) {
    ++failures;
    if (failures < 64) {
      std::this_thread::yield();
    } else {
      // The window can only move once a straggler serial is processed by
      // some other worker; back off so that worker actually gets CPU time
      // on oversubscribed machines instead of drowning in yields.
      std::this_thread::sleep_for(std::chrono::microseconds(50));
      send_pending();
    }
  }
}

std::vector<std::size_t> NonBlockingReorderer::occupied_slots() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i <= mask_; ++i)
    if (slots_[i].load(std::memory_order_acquire) != nullptr) out.push_back(i);
  return out;
}

void LockBasedReorderer::send(OutputUnit u) {
  std::lock_guard<std::mutex> g(mu_);
  if (u.serial == next_) {
    sink_(std::move(u));
    ++next_;
    for (auto it = waiting_.find(next_); it != waiting_.end(); it = waiting_.find(next_)) {
      sink_(std::move(it->second));
      waiting_.erase(it);
      ++next_;
    }
  } else {
    assert(u.serial > next_);
    waiting_.emplace(u.serial, std::move(u));
  }
}

}  // namespace osr
