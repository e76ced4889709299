/*!
  \file truth_table.hpp
  \brief Dynamic truth tables

  Bit `m` of a table over `n` variables holds the function value for the
  minterm whose binary encoding is `m`, variable 0 being the least
  significant bit.  Tables with fewer than six variables still occupy one
  64-bit word; bits above `2^n` are kept at zero.
*/

#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sllopt
{

class truth_table
{
public:
  truth_table() : truth_table( 0u ) {}

  explicit truth_table( uint32_t num_vars )
      : num_vars_( num_vars ), words_( num_words_for( num_vars ), 0u )
  {
  }

  static uint64_t num_words_for( uint32_t num_vars )
  {
    return num_vars <= 6u ? 1u : ( uint64_t{ 1 } << ( num_vars - 6u ) );
  }

  /*! \brief Projection function of variable `var` over `num_vars` variables. */
  static truth_table nth_var( uint32_t num_vars, uint32_t var )
  {
    static constexpr uint64_t projections[] = {
        0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
        0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };
    assert( var < num_vars );
    truth_table tt( num_vars );
    if ( var < 6u )
    {
      for ( auto& w : tt.words_ )
        w = projections[var];
    }
    else
    {
      auto const period = uint64_t{ 1 } << ( var - 6u );
      for ( uint64_t i = 0; i < tt.words_.size(); ++i )
        tt.words_[i] = ( i & period ) ? ~uint64_t{ 0 } : 0u;
    }
    tt.mask_bits();
    return tt;
  }

  static truth_table constant( uint32_t num_vars, bool value )
  {
    truth_table tt( num_vars );
    if ( value )
    {
      for ( auto& w : tt.words_ )
        w = ~uint64_t{ 0 };
      tt.mask_bits();
    }
    return tt;
  }

  /*! \brief Parses a binary string, most significant minterm first. */
  static truth_table from_binary( std::string const& bits )
  {
    if ( bits.empty() || !std::has_single_bit( bits.size() ) )
      throw std::invalid_argument( "truth table string length must be a power of two" );
    truth_table tt( static_cast<uint32_t>( std::countr_zero( bits.size() ) ) );
    for ( std::size_t i = 0; i < bits.size(); ++i )
    {
      auto const c = bits[bits.size() - 1u - i];
      if ( c != '0' && c != '1' )
        throw std::invalid_argument( "truth table string must be binary" );
      tt.set_bit( i, c == '1' );
    }
    return tt;
  }

  uint32_t num_vars() const { return num_vars_; }
  uint64_t num_bits() const { return uint64_t{ 1 } << num_vars_; }
  std::size_t num_blocks() const { return words_.size(); }

  std::span<uint64_t> words() { return words_; }
  std::span<uint64_t const> words() const { return words_; }

  bool get_bit( uint64_t index ) const
  {
    return ( words_[index >> 6u] >> ( index & 63u ) ) & 1u;
  }

  void set_bit( uint64_t index, bool value = true )
  {
    auto const mask = uint64_t{ 1 } << ( index & 63u );
    if ( value )
      words_[index >> 6u] |= mask;
    else
      words_[index >> 6u] &= ~mask;
  }

  uint64_t count_ones() const
  {
    uint64_t n = 0;
    for ( auto w : words_ )
      n += static_cast<uint64_t>( std::popcount( w ) );
    return n;
  }

  bool is_const0() const
  {
    for ( auto w : words_ )
      if ( w != 0u )
        return false;
    return true;
  }

  bool is_const1() const { return count_ones() == num_bits(); }

  /*! \brief Binary string, most significant minterm first. */
  std::string to_binary() const
  {
    std::string s( num_bits(), '0' );
    for ( uint64_t i = 0; i < num_bits(); ++i )
      if ( get_bit( i ) )
        s[num_bits() - 1u - i] = '1';
    return s;
  }

  truth_table operator~() const
  {
    truth_table r( *this );
    for ( auto& w : r.words_ )
      w = ~w;
    r.mask_bits();
    return r;
  }

  truth_table& operator&=( truth_table const& o )
  {
    check_same_size( o );
    for ( std::size_t i = 0; i < words_.size(); ++i )
      words_[i] &= o.words_[i];
    return *this;
  }

  truth_table& operator|=( truth_table const& o )
  {
    check_same_size( o );
    for ( std::size_t i = 0; i < words_.size(); ++i )
      words_[i] |= o.words_[i];
    return *this;
  }

  truth_table& operator^=( truth_table const& o )
  {
    check_same_size( o );
    for ( std::size_t i = 0; i < words_.size(); ++i )
      words_[i] ^= o.words_[i];
    return *this;
  }

  friend truth_table operator&( truth_table a, truth_table const& b ) { return a &= b; }
  friend truth_table operator|( truth_table a, truth_table const& b ) { return a |= b; }
  friend truth_table operator^( truth_table a, truth_table const& b ) { return a ^= b; }

  /*! \brief `a & ~b` without materializing the complement. */
  friend truth_table and_not( truth_table a, truth_table const& b )
  {
    a.check_same_size( b );
    for ( std::size_t i = 0; i < a.words_.size(); ++i )
      a.words_[i] &= ~b.words_[i];
    return a;
  }

  /*! \brief True iff `a & b` has at least one set bit. */
  friend bool intersects( truth_table const& a, truth_table const& b )
  {
    a.check_same_size( b );
    for ( std::size_t i = 0; i < a.words_.size(); ++i )
      if ( a.words_[i] & b.words_[i] )
        return true;
    return false;
  }

  bool operator==( truth_table const& o ) const = default;

  /*! \brief True iff the function value does not depend on `var`. */
  bool is_independent_of( uint32_t var ) const
  {
    for ( uint64_t m = 0; m < num_bits(); ++m )
      if ( ( ( m >> var ) & 1u ) == 0u && get_bit( m ) != get_bit( m | ( uint64_t{ 1 } << var ) ) )
        return false;
    return true;
  }

  void mask_bits()
  {
    if ( num_vars_ < 6u )
      words_[0] &= ( uint64_t{ 1 } << ( uint64_t{ 1 } << num_vars_ ) ) - 1u;
  }

private:
  void check_same_size( truth_table const& o ) const
  {
    if ( o.num_vars_ != num_vars_ )
      throw std::invalid_argument( "truth table size mismatch" );
  }

  uint32_t num_vars_;
  std::vector<uint64_t> words_;
};

/*! \brief Evaluates a LUT function on 64 parallel input patterns.
 *
 * `inputs[i]` carries 64 values of fanin `i`; the LUT is folded as a
 * multiplexer tree, one fanin per level.
 */
inline uint64_t evaluate_lut_word( truth_table const& function, std::span<uint64_t const> inputs )
{
  auto const k = function.num_vars();
  assert( inputs.size() == k );
  if ( k == 0u )
    return function.get_bit( 0 ) ? ~uint64_t{ 0 } : 0u;

  uint64_t stack[64];
  uint64_t const* leaves_src = nullptr;
  uint64_t expanded[64];
  auto const leaves = uint64_t{ 1 } << k;
  if ( k <= 6u )
  {
    auto const bits = function.words()[0];
    for ( uint64_t i = 0; i < leaves; ++i )
      expanded[i] = ( ( bits >> i ) & 1u ) ? ~uint64_t{ 0 } : 0u;
    leaves_src = expanded;
  }
  else
  {
    /* wide functions: bit-serial evaluation */
    uint64_t out = 0;
    for ( uint32_t bit = 0; bit < 64u; ++bit )
    {
      uint64_t minterm = 0;
      for ( uint32_t i = 0; i < k; ++i )
        minterm |= ( ( inputs[i] >> bit ) & 1u ) << i;
      out |= uint64_t{ function.get_bit( minterm ) } << bit;
    }
    return out;
  }

  auto width = leaves;
  for ( uint64_t i = 0; i < width; ++i )
    stack[i] = leaves_src[i];
  for ( uint32_t var = 0; var < k; ++var )
  {
    auto const x = inputs[var];
    width >>= 1u;
    for ( uint64_t i = 0; i < width; ++i )
      stack[i] = ( x & stack[2 * i + 1] ) | ( ~x & stack[2 * i] );
  }
  return stack[0];
}

/*! \brief Evaluates a LUT function over whole truth tables of its fanins. */
inline truth_table evaluate_lut( truth_table const& function, std::span<truth_table const* const> fanins, uint32_t num_vars )
{
  truth_table out( num_vars );
  std::vector<uint64_t> in( fanins.size() );
  for ( std::size_t w = 0; w < out.num_blocks(); ++w )
  {
    for ( std::size_t i = 0; i < fanins.size(); ++i )
      in[i] = fanins[i]->words()[w];
    out.words()[w] = evaluate_lut_word( function, in );
  }
  out.mask_bits();
  return out;
}

} /* namespace sllopt */
