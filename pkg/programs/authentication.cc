# Multiparty authentication: an identity provider ip authenticates a
# client c to a server s, then s hands c a token on success.
#
# Abstract data is encoded over the fixed expression grammar:
#   credentials  := creds        (local variable of c)
#   check x      := x == secret  (secret is a local variable of ip)
#   token        := tok          (local variable of s)
main {
  c.creds -> ip.x;
  if ip.x == secret then {
    ip -> s[left];
    ip -> c[left];
    s.tok -> c.t;
    end
  } else {
    ip -> s[right];
    ip -> c[right];
    end
  }
}
