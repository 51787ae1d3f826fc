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

/** \file     synthetic.cpp
    \brief    generated blocks and frames for tests, toy training sets and smoke runs
*/

#include "cupart/Synthetic.hpp"
#include "cupart/Error.hpp"
#include "cupart/Random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cupart
{

namespace
{

uint8_t clampSample( double v )
{
  return static_cast<uint8_t>( std::clamp( std::lround( v ), 0L, 255L ) );
}

} // namespace

LumaBlock makeConstantBlock( int size, uint8_t level )
{
  return makeBlock( size, std::vector<uint8_t>( static_cast<size_t>( size ) * size, level ) );
}

LumaBlock makeCheckerboardBlock( int size, int cell, uint8_t low, uint8_t high )
{
  if( cell <= 0 )
  {
    throw Error( "checkerboard cell must be positive" );
  }
  std::vector<uint8_t> samples( static_cast<size_t>( size ) * size );
  for( int y = 0; y < size; y++ )
  {
    for( int x = 0; x < size; x++ )
    {
      samples[static_cast<size_t>( y ) * size + x] = ( ( x / cell + y / cell ) & 1 ) ? high : low;
    }
  }
  return makeBlock( size, std::move( samples ) );
}

std::vector<LabeledBlock> makeToyDataset( int cuSize, size_t count, uint64_t seed, double splitFraction )
{
  if( !isDecisionSize( cuSize ) )
  {
    throw Error( "toy datasets exist for CU sizes 64, 32 and 16" );
  }
  Rng rng( seed );
  int cells = 0;
  while( ( 2 << cells ) <= cuSize )
  {
    cells++;
  }
  std::vector<LabeledBlock> records;
  records.reserve( count );
  for( size_t i = 0; i < count; i++ )
  {
    LabeledBlock record;
    record.splitFlag = rng.uniform() < splitFraction;
    if( record.splitFlag )
    {
      const int cell     = 1 << rng.below( cells );
      const int contrast = 80 + static_cast<int>( rng.below( 120 ) );
      const int low      = static_cast<int>( rng.below( 256 - contrast ) );
      const bool flip    = rng.below( 2 );
      const auto a       = static_cast<uint8_t>( low );
      const auto b       = static_cast<uint8_t>( low + contrast );
      record.block       = makeCheckerboardBlock( cuSize, cell, flip ? b : a, flip ? a : b );
    }
    else
    {
      record.block = makeConstantBlock( cuSize, static_cast<uint8_t>( rng.below( 256 ) ) );
    }
    record.block.origin = { 0, static_cast<int>( i % 1024 ) * cuSize, static_cast<int>( i / 1024 ) * cuSize };
    records.push_back( std::move( record ) );
  }
  return records;
}

Frame makeConstantFrame( int width, int height, uint8_t level, int index )
{
  return makeFrame( width, height, std::vector<uint8_t>( static_cast<size_t>( width ) * height, level ), index );
}

Frame makeSmoothFrame( int width, int height, uint64_t seed, int index )
{
  Rng          rng( seed );
  const double base   = rng.uniform( 60.0, 190.0 );
  const double slopeX = rng.uniform( -0.06, 0.06 );
  const double slopeY = rng.uniform( -0.06, 0.06 );
  const double ripple = rng.uniform( 1.0, 3.0 );
  const double period = rng.uniform( 150.0, 300.0 );
  std::vector<uint8_t> luma( static_cast<size_t>( width ) * height );
  for( int y = 0; y < height; y++ )
  {
    for( int x = 0; x < width; x++ )
    {
      const double v = base + slopeX * x + slopeY * y + ripple * std::sin( 2.0 * std::numbers::pi * ( x + y ) / period );
      luma[static_cast<size_t>( y ) * width + x] = clampSample( v );
    }
  }
  return makeFrame( width, height, std::move( luma ), index );
}

Frame makeMixedFrame( int width, int height, uint64_t seed, int index )
{
  constexpr int        kPatch = 16;
  Rng                  rng( seed );
  std::vector<uint8_t> luma( static_cast<size_t>( width ) * height );
  for( int py = 0; py < height; py += kPatch )
  {
    for( int px = 0; px < width; px += kPatch )
    {
      const auto   kind      = rng.below( 4 );
      const double base      = rng.uniform( 20.0, 235.0 );
      const double amplitude = std::pow( 2.0, rng.uniform( 0.0, 7.0 ) );
      const double angle     = rng.uniform( 0.0, 2.0 * std::numbers::pi );
      const int    edgeAt    = static_cast<int>( rng.below( kPatch ) );
      for( int y = py; y < std::min( py + kPatch, height ); y++ )
      {
        for( int x = px; x < std::min( px + kPatch, width ); x++ )
        {
          const double u = ( std::cos( angle ) * ( x - px ) + std::sin( angle ) * ( y - py ) ) / kPatch;
          double       v = base;
          switch( kind )
          {
          case 0: break;
          case 1: v += amplitude * ( u - 0.5 ); break;
          case 2: v += amplitude * ( rng.uniform() - 0.5 ); break;
          default: v += ( x - px ) >= edgeAt ? amplitude * 0.5 : -amplitude * 0.5; break;
          }
          luma[static_cast<size_t>( y ) * width + x] = clampSample( v );
        }
      }
    }
  }
  return makeFrame( width, height, std::move( luma ), index );
}

} // namespace cupart
