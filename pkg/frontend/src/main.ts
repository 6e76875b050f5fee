import { ApiClient } from "./api.js";
import { mountChat } from "./app.js";

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app mount point");
}
mountChat(root, new ApiClient(""));
