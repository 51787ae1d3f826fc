/* The copyright in this software is being made available under the BSD
 * License, included below. This software may be subject to other third party
 * and contributor rights, including patent rights, and no such rights are
 * granted under this license.
 *
 * Copyright (c) 2026, The cupart Authors
 * All rights reserved.
 *
 * Redistribution and use in source and binary forms, with or without
 * modification, are permitted provided that the following conditions are met:
 *
 *  * Redistributions of source code must retain the above copyright notice,
 *    this list of conditions and the following disclaimer.
 *  * Redistributions in binary form must reproduce the above copyright notice,
 *    this list of conditions and the following disclaimer in the documentation
 *    and/or other materials provided with the distribution.
 *  * Neither the name of the copyright holder nor the names of its contributors
 *    may be used to endorse or promote products derived from this software
 *    without specific prior written permission.
 *
 * THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
 * AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
 * IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE
 * ARE DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS
 * BE LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR
 * CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF
 * SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS
 * INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN
 * CONTRACT, STRICT LIABILITY, OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE)
 * ARISING IN ANY WAY OUT OF THE USE OF THIS SOFTWARE, EVEN IF ADVISED OF
 * THE POSSIBILITY OF SUCH DAMAGE.
 */

/** \file     IntraReference.hpp
    \brief    independent intra cost and exhaustive partition enumeration for oracle tests
*/

#pragma once

#include "cupart/MediaIo.hpp"
#include "cupart/RdoOracle.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <tuple>
#include <vector>

namespace cupart::reference
{

/// Block with references read straight from the frame, edge samples repeated outside.
inline LumaBlock blockAt( const Frame& frame, int x, int y, int size )
{
  LumaBlock block;
  block.size   = size;
  block.origin = { frame.index, x, y };
  for( int j = 0; j < size; j++ )
  {
    for( int i = 0; i < size; i++ )
    {
      block.samples.push_back( frame.luma[( y + j ) * frame.width + x + i] );
    }
  }
  for( int i = 0; i < size; i++ )
  {
    block.refs.top.push_back( frame.luma[( y > 0 ? y - 1 : 0 ) * frame.width + x + i] );
    block.refs.left.push_back( frame.luma[( y + i ) * frame.width + ( x > 0 ? x - 1 : 0 )] );
  }
  return block;
}

inline int log2Of( int n )
{
  int l = 0;
  while( ( 1 << l ) < n )
  {
    l++;
  }
  return l;
}

/// Prediction sample at (x, y) for mode 0 DC, 1 Planar, 2 Horizontal, 3 Vertical.
inline int predictedSample( int mode, const LumaBlock& b, int x, int y )
{
  const int n     = b.size;
  const int shift = log2Of( n ) + 1;
  if( mode == 0 )
  {
    int s = n;
    for( int i = 0; i < n; i++ )
    {
      s += b.refs.top[i];
      s += b.refs.left[i];
    }
    return s >> shift;
  }
  if( mode == 1 )
  {
    const int h = ( n - 1 - x ) * b.refs.left[y] + ( x + 1 ) * b.refs.top[n - 1];
    const int v = ( n - 1 - y ) * b.refs.top[x] + ( y + 1 ) * b.refs.left[n - 1];
    return ( h + v + n ) >> shift;
  }
  return mode == 2 ? b.refs.left[y] : b.refs.top[x];
}

inline uint64_t expGolombSignedBits( int64_t level )
{
  if( level == 0 )
  {
    return 0;
  }
  uint64_t m    = static_cast<uint64_t>( std::llabs( level ) );
  uint64_t bits = 0;
  while( m > 1 )
  {
    m >>= 1;
    bits++;
  }
  return 2 * bits + 2;
}

struct CostTerms
{
  uint64_t distortion = 0;
  uint64_t rate       = 0;
};

/// Direct double-sum DCT on each TU, dead-zone quantizer, best of the four modes.
inline CostTerms intraCostTerms( const LumaBlock& b, int qp )
{
  const int    n    = b.size;
  const int    tu   = n < 32 ? n : 32;
  const double step = std::pow( 2.0, ( qp - 4 ) / 6.0 );
  const double lam  = 0.57 * std::pow( 2.0, ( qp - 12 ) / 3.0 );

  std::vector<double> cosTable( tu * tu );
  for( int k = 0; k < tu; k++ )
  {
    for( int i = 0; i < tu; i++ )
    {
      cosTable[k * tu + i] = std::cos( std::numbers::pi * ( 2 * i + 1 ) * k / ( 2.0 * tu ) );
    }
  }

  CostTerms best;
  double    bestCost = 0.0;
  for( int mode = 0; mode < 4; mode++ )
  {
    std::vector<int> r( n * n );
    for( int y = 0; y < n; y++ )
    {
      for( int x = 0; x < n; x++ )
      {
        r[y * n + x] = b.samples[y * n + x] - predictedSample( mode, b, x, y );
      }
    }
    double   dist = 0.0;
    uint64_t bits = 0;
    for( int ty = 0; ty < n; ty += tu )
    {
      for( int tx = 0; tx < n; tx += tu )
      {
        for( int v = 0; v < tu; v++ )
        {
          for( int u = 0; u < tu; u++ )
          {
            double acc = 0.0;
            for( int y = 0; y < tu; y++ )
            {
              for( int x = 0; x < tu; x++ )
              {
                acc += r[( ty + y ) * n + tx + x] * cosTable[u * tu + x] * cosTable[v * tu + y];
              }
            }
            const double c     = acc * std::sqrt( ( u ? 2.0 : 1.0 ) / tu ) * std::sqrt( ( v ? 2.0 : 1.0 ) / tu );
            const double a     = std::fabs( c );
            const auto   level = static_cast<int64_t>( std::floor( a / step + 1.0 / 3.0 ) );
            dist += ( a - level * step ) * ( a - level * step );
            bits += expGolombSignedBits( level );
          }
        }
      }
    }
    CostTerms terms{ static_cast<uint64_t>( std::llround( dist ) ), 8 + bits };
    const double cost = static_cast<double>( terms.distortion ) + lam * static_cast<double>( terms.rate );
    if( mode == 0 || cost < bestCost )
    {
      best     = terms;
      bestCost = cost;
    }
  }
  return best;
}

/// Leaf costs of every node of a quad-tree rooted at `root`, keyed by (size, x, y).
class CostTable
{
public:
  CostTable( const Frame& frame, int x, int y, int size, int qp ) : m_lambda( 0.57 * std::pow( 2.0, ( qp - 12 ) / 3.0 ) )
  {
    fill( frame, x, y, size, qp );
  }

  double lambda() const { return m_lambda; }
  const CostTerms& at( int size, int x, int y ) const { return m_terms.at( { size, x, y } ); }

  /// Cost of every partition of the node, flags cost 1 bit per split node.
  std::vector<double> allPartitionCosts( int size, int x, int y ) const
  {
    std::vector<double> options{ whole( size, x, y ) };
    if( size == 8 )
    {
      return options;
    }
    for( const double s: splitPartitionCosts( size, x, y ) )
    {
      options.push_back( s );
    }
    return options;
  }

  /// Costs of every partition whose root is split.
  std::vector<double> splitPartitionCosts( int size, int x, int y ) const
  {
    const int h = size / 2;
    const std::vector<double> q[4] = { allPartitionCosts( h, x, y ), allPartitionCosts( h, x + h, y ),
                                       allPartitionCosts( h, x, y + h ), allPartitionCosts( h, x + h, y + h ) };
    std::vector<double> out;
    out.reserve( q[0].size() * q[1].size() * q[2].size() * q[3].size() );
    for( const double a: q[0] )
    {
      for( const double b: q[1] )
      {
        for( const double c: q[2] )
        {
          for( const double d: q[3] )
          {
            out.push_back( a + b + c + d + m_lambda );
          }
        }
      }
    }
    return out;
  }

  double whole( int size, int x, int y ) const
  {
    const auto& t = at( size, x, y );
    return static_cast<double>( t.distortion ) + m_lambda * static_cast<double>( t.rate );
  }

private:
  void fill( const Frame& frame, int x, int y, int size, int qp )
  {
    m_terms[{ size, x, y }] = intraCostTerms( blockAt( frame, x, y, size ), qp );
    if( size > 8 )
    {
      const int h = size / 2;
      fill( frame, x, y, h, qp );
      fill( frame, x + h, y, h, qp );
      fill( frame, x, y + h, h, qp );
      fill( frame, x + h, y + h, h, qp );
    }
  }

  double                                            m_lambda;
  std::map<std::tuple<int, int, int>, CostTerms>    m_terms;
};

} // namespace cupart::reference
