#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string_view>
#include <type_traits>

namespace steklov
{
/// Incremental 64-bit FNV-1a. Stable across platforms for the trivially copyable types we feed it
/// (little-endian IEEE doubles and fixed-width integers).
class Fnv1a
{
public:
    void bytes(const void* data, std::size_t n)
    {
        const auto* p = static_cast< const unsigned char* >(data);
        for (std::size_t i = 0; i < n; ++i)
        {
            m_state ^= p[i];
            m_state *= 0x100000001b3ULL;
        }
    }

    template < typename T >
        requires std::is_trivially_copyable_v< T >
    void value(const T& v)
    {
        bytes(&v, sizeof(T));
    }

    template < typename T >
    void values(std::span< const T > vs)
    {
        for (const auto& v : vs)
            value(v);
    }

    void text(std::string_view s) { bytes(s.data(), s.size()); }

    [[nodiscard]] std::uint64_t digest() const { return m_state; }

private:
    std::uint64_t m_state = 0xcbf29ce484222325ULL;
};

} // namespace steklov
