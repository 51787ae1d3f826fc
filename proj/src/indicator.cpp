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

/** \file     indicator.cpp
    \brief    luma range / standard deviation indicators and the range early-termination filter
*/

#include "cupart/Indicator.hpp"
#include "cupart/Error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace cupart
{

int EarlyTermThresholds::forSize( int size ) const
{
  switch( size )
  {
  case 64: return t64;
  case 32: return t32;
  case 16: return t16;
  default: throw ShapeError( "no early-termination threshold for size " + std::to_string( size ) );
  }
}

int lumaRange( const LumaBlock& block )
{
  if( block.samples.empty() )
  {
    throw ShapeError( "range of an empty block" );
  }
  const auto [lo, hi] = std::minmax_element( block.samples.begin(), block.samples.end() );
  return *hi - *lo;
}

double lumaStdDev( const LumaBlock& block )
{
  if( block.samples.empty() )
  {
    throw ShapeError( "standard deviation of an empty block" );
  }
  // exact integer moments; n * sum(x^2) - sum(x)^2 is n^2 times the variance
  int64_t sum = 0, sumSq = 0;
  for( const uint8_t s: block.samples )
  {
    sum += s;
    sumSq += static_cast<int64_t>( s ) * s;
  }
  const auto n         = static_cast<int64_t>( block.samples.size() );
  const auto numerator = n * sumSq - sum * sum;
  return std::sqrt( static_cast<double>( numerator ) ) / static_cast<double>( n );
}

FilterDecision earlyTerminate( const LumaBlock& block, const EarlyTermThresholds& thresholds )
{
  if( !isDecisionSize( block.size ) )
  {
    throw ShapeError( "early termination applies to 64/32/16 CUs only, got " + std::to_string( block.size ) );
  }
  return lumaRange( block ) < thresholds.forSize( block.size ) ? FilterDecision::Terminate : FilterDecision::Pass;
}

const char* indicatorName( Indicator indicator )
{
  return indicator == Indicator::Range ? "range" : "stddev";
}

double defaultBinWidth( Indicator indicator )
{
  return indicator == Indicator::Range ? 1.0 : 0.5;
}

double IndicatorStats::nonSplitDensity( size_t bin ) const
{
  uint64_t total = 0;
  for( auto c: nonSplitHistogram )
  {
    total += c;
  }
  return total ? static_cast<double>( nonSplitHistogram[bin] ) / ( static_cast<double>( total ) * binWidth ) : 0.0;
}

double IndicatorStats::splitDensity( size_t bin ) const
{
  uint64_t total = 0;
  for( auto c: splitHistogram )
  {
    total += c;
  }
  return total ? static_cast<double>( splitHistogram[bin] ) / ( static_cast<double>( total ) * binWidth ) : 0.0;
}

IndicatorStats buildDensity( std::span<const LabeledBlock> blocks, Indicator indicator, double binWidth )
{
  if( !( binWidth > 0.0 ) )
  {
    throw Error( "histogram bin width must be positive" );
  }
  if( blocks.empty() )
  {
    throw Error( "no blocks to build a density from" );
  }
  IndicatorStats stats;
  stats.cuSize    = blocks.front().block.size;
  stats.indicator = indicator;
  stats.binWidth  = binWidth;

  // range lives in [0, 255], stddev in [0, 127.5]
  const double upper = indicator == Indicator::Range ? 256.0 : 128.0;
  const auto   bins  = static_cast<size_t>( std::ceil( upper / binWidth ) );
  stats.nonSplitHistogram.assign( bins, 0 );
  stats.splitHistogram.assign( bins, 0 );

  for( const auto& labeled: blocks )
  {
    if( labeled.block.size != stats.cuSize )
    {
      throw ShapeError( "density input mixes CU sizes" );
    }
    const double value = indicator == Indicator::Range ? lumaRange( labeled.block ) : lumaStdDev( labeled.block );
    const auto   bin   = std::min( bins - 1, static_cast<size_t>( std::floor( value / binWidth ) ) );
    ( labeled.splitFlag ? stats.splitHistogram : stats.nonSplitHistogram )[bin]++;
  }

  auto empty = []( const std::vector<uint64_t>& h ) { return std::all_of( h.begin(), h.end(), []( uint64_t c ) { return c == 0; } ); };
  if( empty( stats.nonSplitHistogram ) )
  {
    throw Error( "density: no non-split blocks for size " + std::to_string( stats.cuSize ) );
  }
  if( empty( stats.splitHistogram ) )
  {
    throw Error( "density: no split blocks for size " + std::to_string( stats.cuSize ) );
  }
  return stats;
}

void writeDensityCsv( std::ostream& out, const IndicatorStats& stats )
{
  out << "bin_lo,bin_hi,density_non_split,density_split\n";
  for( size_t bin = 0; bin < stats.binCount(); bin++ )
  {
    out << stats.binLow( bin ) << ',' << stats.binHigh( bin ) << ',' << stats.nonSplitDensity( bin ) << ','
        << stats.splitDensity( bin ) << '\n';
  }
}

} // namespace cupart
