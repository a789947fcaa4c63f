export { RewardClient } from "./client.js";
export { TimeoutError, TransportError, UnknownSampleError } from "./errors.js";
export { HttpTransport } from "./httpTransport.js";
export { StdioTransport } from "./stdioTransport.js";
export type { Transport } from "./transport.js";
export type {
  BatchReply,
  ClientConfig,
  RewardBreakdown,
  ScoreRequest,
  ScoreResultItem,
  ServerErrorPayload,
} from "./types.js";
