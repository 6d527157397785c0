#include <string>
#include <vector>

namespace revmine {

const std::vector<std::string>& builtin_pos_words() {
  static const std::vector<std::string> words{
    "accent", "accept", "access", "account", "act", "activate", "add", "address", "adjust", "agent", "agree",
    "alarm", "album", "alert", "allow", "analyse", "analyze", "animate", "announce", "answer", "apologize",
    "app", "appear", "apply", "appointment", "approve", "archive", "arrange", "arrive", "ask", "assign",
    "assist", "attach", "attachment", "attempt", "attend", "audio", "authenticate", "author", "avatar",
    "avoid", "back", "backup", "badge", "bake", "balance", "ban", "bank", "bar", "battery", "bear", "beat",
    "become", "begin", "believe", "bet", "bill", "bind", "bite", "blink", "block", "blow", "bookmark",
    "boost", "boot", "border", "borrow", "bounce", "break", "breathe", "brief", "bring", "browse", "browser",
    "buffer", "bug", "build", "bump", "burn", "bury", "button", "buy", "buzz", "calculate", "calendar",
    "calibrate", "call", "camera", "camp", "cancel", "caption", "capture", "card", "care", "carry", "cart",
    "cast", "catch", "cause", "celebrate", "chain", "change", "channel", "charge", "chart", "chase", "chat",
    "cheat", "check", "cheer", "chew", "choose", "chop", "cite", "claim", "clap", "clean", "clear", "click",
    "climb", "cling", "clip", "clone", "close", "cloud", "coach", "code", "coin", "collect", "color",
    "combine", "come", "comfort", "command", "comment", "commit", "compare", "compete", "compile", "complain",
    "complete", "compose", "compress", "compute", "confirm", "confuse", "connect", "connection", "consider",
    "consume", "contact", "contain", "content", "continue", "control", "convert", "copy", "correct", "cost",
    "count", "cover", "crash", "crawl", "create", "credit", "crop", "crush", "cry", "cursor", "customize",
    "cut", "cycle", "dance", "data", "date", "day", "deal", "debug", "decide", "decline", "decode", "decrypt",
    "deduct", "defend", "define", "delay", "delete", "deliver", "delivery", "demand", "deny", "deploy",
    "describe", "design", "destroy", "detect", "develop", "device", "dial", "die", "differ", "dig", "direct",
    "disable", "disappear", "disconnect", "discover", "dislike", "dispatch", "display", "dive", "divide",
    "do", "document", "donate", "download", "draft", "drag", "drain", "draw", "dream", "dress", "drink",
    "drive", "drop", "drown", "dump", "earn", "eat", "edge", "edit", "elect", "email", "embed", "emerge",
    "emoji", "employ", "enable", "encode", "encrypt", "end", "engage", "enjoy", "ensure", "enter", "erase",
    "error", "escape", "estimate", "evaluate", "event", "examine", "exceed", "exchange", "execute", "exist",
    "exit", "expand", "expect", "experience", "expire", "explain", "explore", "export", "expose", "extend",
    "extract", "face", "fade", "fail", "fake", "fall", "favorite", "fear", "feature", "feed", "feel", "fetch",
    "fight", "figure", "file", "fill", "filter", "find", "finish", "fit", "fix", "flag", "flash", "flip",
    "float", "flood", "flow", "fly", "focus", "fold", "folder", "follow", "follower", "font", "force",
    "forget", "format", "forward", "frame", "free", "freeze", "friend", "function", "fund", "gain", "gallery",
    "game", "gather", "generate", "get", "gif", "give", "glitch", "go", "grab", "grant", "greet", "group",
    "grow", "guess", "guide", "handle", "hang", "happen", "hate", "heal", "hear", "heat", "help", "hide",
    "highlight", "hire", "hit", "hold", "home", "host", "hour", "hover", "hunt", "hurt", "icon", "identify",
    "ignore", "image", "imagine", "import", "improve", "inbox", "include", "increase", "indicate", "inform",
    "inject", "input", "insert", "inspect", "install", "insure", "intend", "interrupt", "introduce", "invest",
    "invite", "involve", "issue", "item", "join", "jump", "keep", "key", "keyboard", "kick", "kill", "kiss",
    "knock", "know", "label", "lag", "land", "language", "last", "laugh", "launch", "lay", "layout", "lead",
    "learn", "leave", "lend", "lens", "let", "level", "library", "lie", "lift", "light", "like", "limit",
    "line", "linger", "link", "list", "listen", "live", "load", "location", "lock", "log", "login", "logout",
    "look", "loop", "lose", "love", "make", "manage", "map", "mark", "match", "matter", "mean", "measure",
    "media", "meet", "meeting", "melt", "member", "memory", "mention", "menu", "merge", "message", "method",
    "microphone", "migrate", "mind", "minute", "mirror", "miss", "mix", "mode", "modify", "money", "monitor",
    "month", "mount", "move", "multiply", "music", "mute", "name", "navigate", "need", "nest", "network",
    "news", "note", "notice", "notification", "notify", "number", "obtain", "occur", "offer", "omit", "open",
    "operate", "option", "order", "organize", "overwrite", "own", "pack", "page", "paint", "pair", "park",
    "participate", "pass", "password", "paste", "patch", "pause", "pay", "payment", "people", "perform",
    "permission", "permit", "person", "phone", "photo", "pick", "picture", "pin", "pitch", "place", "plan",
    "plant", "play", "player", "playlist", "plug", "point", "poll", "pop", "post", "pour", "power",
    "practice", "pray", "predict", "prefer", "prepare", "present", "preserve", "press", "prevent", "preview",
    "print", "problem", "proceed", "process", "produce", "profile", "program", "promise", "promote", "prompt",
    "protect", "prove", "provide", "publish", "pull", "punch", "purchase", "push", "put", "qualify",
    "quality", "query", "question", "queue", "quit", "race", "rain", "raise", "rank", "rate", "reach",
    "react", "read", "reboot", "recall", "receive", "recognize", "recommend", "record", "recover", "redirect",
    "reduce", "reel", "reflect", "refresh", "refund", "refuse", "register", "reject", "relate", "relax",
    "release", "reload", "rely", "remain", "remember", "remind", "reminder", "remove", "rename", "rent",
    "repair", "repeat", "replace", "reply", "report", "represent", "request", "require", "reserve", "reset",
    "resize", "resolve", "respond", "rest", "restart", "restore", "restrict", "result", "resume", "retrieve",
    "return", "reveal", "review", "ride", "ring", "rise", "roll", "rotate", "rule", "run", "rush", "sample",
    "save", "say", "scale", "scan", "schedule", "score", "screen", "screenshot", "scroll", "seal", "search",
    "seat", "secure", "see", "seek", "seem", "select", "sell", "send", "sentence", "serve", "server",
    "service", "set", "setting", "setup", "shake", "shape", "share", "shift", "shine", "shoot", "shop",
    "shout", "show", "shrink", "shut", "sign", "signal", "sing", "sink", "sit", "size", "ski", "skip",
    "sleep", "slide", "smell", "smile", "snap", "sneak", "snooze", "solve", "song", "sort", "sound", "speak",
    "speaker", "speed", "spell", "spend", "split", "spread", "squeeze", "stack", "stand", "stare", "start",
    "state", "status", "stay", "steal", "step", "stick", "sticker", "sting", "stop", "storage", "store",
    "story", "stream", "strike", "struggle", "submit", "subscribe", "subscription", "succeed", "suffer",
    "suggest", "supply", "support", "surf", "survive", "suspend", "swap", "swim", "swipe", "switch", "sync",
    "system", "tab", "tag", "take", "talk", "tap", "task", "teach", "team", "tear", "tell", "test", "text",
    "thank", "theme", "think", "thread", "throw", "tie", "time", "timeline", "title", "toggle", "tool",
    "touch", "track", "train", "transfer", "transform", "translate", "trap", "travel", "treat", "trigger",
    "trim", "trust", "try", "turn", "type", "unblock", "unfollow", "uninstall", "unlock", "unmute", "unpin",
    "unsubscribe", "unzip", "update", "upgrade", "upload", "use", "user", "vanish", "verify", "version",
    "vibrate", "video", "view", "visit", "voice", "voicemail", "volume", "vote", "wait", "wake", "walk",
    "want", "warn", "wash", "waste", "watch", "way", "wear", "whisper", "widget", "win", "window", "wipe",
    "wish", "wonder", "work", "world", "worry", "wrap", "write", "yell", "zoom",
  };
  return words;
}

}  // namespace revmine
