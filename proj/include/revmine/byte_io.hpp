#pragma once

// Little-endian primitives for the binary vector store and checkpoint files.

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

namespace revmine::byte_io {

void write_u32(std::ostream& out, std::uint32_t v);
void write_f32(std::ostream& out, float v);
void write_f64(std::ostream& out, double v);
void write_string(std::ostream& out, const std::string& s);  // u32 length + bytes

// Readers throw InputError on truncated input.
std::uint32_t read_u32(std::istream& in);
float read_f32(std::istream& in);
double read_f64(std::istream& in);
std::string read_string(std::istream& in, std::uint32_t max_len = 1u << 30);
void read_exact(std::istream& in, char* dst, std::size_t n);

}  // namespace revmine::byte_io
