#pragma once

#include <condition_variable>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

namespace neuropt {

/// Capacity-1 channel with latest-wins semantics: `put` never blocks and
/// overwrites an unread value. Consumers track the last version they read.
template <typename T>
class Slot
{
public:
    void put(T value)
    {
        {
            std::lock_guard lock(mutex_);
            if (version_ > read_version_)
                ++overwritten_;
            value_ = std::move(value);
            ++version_;
        }
        cv_.notify_all();
    }

    /// Blocks until a value newer than `seen` arrives. Returns nullopt once the
    /// slot is closed and nothing newer is pending.
    std::optional<T> wait_newer(std::uint64_t& seen)
    {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return version_ > seen || closed_; });
        if (version_ <= seen)
            return std::nullopt;
        seen = version_;
        read_version_ = version_;
        return value_;
    }

    /// Most recent value without waiting.
    std::optional<T> latest() const
    {
        std::lock_guard lock(mutex_);
        return value_;
    }

    void close()
    {
        {
            std::lock_guard lock(mutex_);
            closed_ = true;
        }
        cv_.notify_all();
    }

    /// Values replaced before any consumer read them.
    std::uint64_t overwritten() const
    {
        std::lock_guard lock(mutex_);
        return overwritten_;
    }

private:
    mutable std::mutex mutex_;
    std::condition_variable cv_;
    std::optional<T> value_;
    std::uint64_t version_ = 0;
    std::uint64_t read_version_ = 0;
    std::uint64_t overwritten_ = 0;
    bool closed_ = false;
};

/// One latest-wins slot per producer behind a single wake-up, for collectors
/// that merge row updates from many units.
template <typename T>
class Inbox
{
public:
    explicit Inbox(std::size_t producers) : values_(producers), fresh_(producers, 0) {}

    void put(std::size_t producer, T value)
    {
        {
            std::lock_guard lock(mutex_);
            values_[producer] = std::move(value);
            fresh_[producer] = 1;
            pending_ = true;
        }
        cv_.notify_all();
    }

    /// Blocks until at least one producer has posted; returns the fresh
    /// entries in ascending producer order. Empty once closed.
    std::vector<std::pair<std::size_t, T>> wait_any()
    {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return pending_ || closed_; });
        std::vector<std::pair<std::size_t, T>> out;
        if (!pending_)
            return out;
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (fresh_[i] != 0) {
                out.emplace_back(i, std::move(*values_[i]));
                values_[i].reset();
                fresh_[i] = 0;
            }
        }
        pending_ = false;
        return out;
    }

    void close()
    {
        {
            std::lock_guard lock(mutex_);
            closed_ = true;
        }
        cv_.notify_all();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    std::vector<std::optional<T>> values_;
    std::vector<std::uint8_t> fresh_;
    bool pending_ = false;
    bool closed_ = false;
};

} // namespace neuropt
