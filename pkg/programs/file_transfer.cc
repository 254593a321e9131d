# File transfer with retry: the server s sends the file together with its
# checksum; the client c verifies and either acknowledges or asks again.
#
# Abstract data is encoded over the fixed expression grammar:
#   (file, check)          := pair(file, chk)      (locals of s)
#   crc(fst(x)) == snd(x)  := fst(x) == snd(x)     (crc modelled as identity)
def FileTransfer(c, s) {
  s.pair(file, chk) -> c.x;
  if c.fst(x) == snd(x) then {
    c -> s[left];
    end
  } else {
    c -> s[right];
    call FileTransfer
  }
}

main {
  call FileTransfer
}
