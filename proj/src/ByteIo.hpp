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

/** \file     ByteIo.hpp
    \brief    little-endian field writers/readers for the binary file formats
*/

#pragma once

#include "cupart/Error.hpp"

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

namespace cupart::detail
{

template<typename T>
void putLe( std::ostream& out, T value )
{
  static_assert( std::is_unsigned_v<T> );
  char bytes[sizeof( T )];
  for( size_t i = 0; i < sizeof( T ); i++ )
  {
    bytes[i] = static_cast<char>( ( value >> ( 8 * i ) ) & 0xFF );
  }
  out.write( bytes, sizeof( T ) );
}

inline void putF64( std::ostream& out, double value )
{
  putLe( out, std::bit_cast<uint64_t>( value ) );
}

template<typename T>
T getLe( std::istream& in, const char* what )
{
  static_assert( std::is_unsigned_v<T> );
  unsigned char bytes[sizeof( T )];
  if( !in.read( reinterpret_cast<char*>( bytes ), sizeof( T ) ) )
  {
    throw FormatError( std::string( "truncated file while reading " ) + what );
  }
  T value = 0;
  for( size_t i = 0; i < sizeof( T ); i++ )
  {
    value |= static_cast<T>( bytes[i] ) << ( 8 * i );
  }
  return value;
}

inline double getF64( std::istream& in, const char* what )
{
  return std::bit_cast<double>( getLe<uint64_t>( in, what ) );
}

inline void expectMagic( std::istream& in, const char ( &magic )[5] )
{
  char got[4];
  if( !in.read( got, 4 ) || std::string( got, 4 ) != std::string( magic, 4 ) )
  {
    throw FormatError( std::string( "bad magic, expected " ) + magic );
  }
}

} // namespace cupart::detail
