import { AskClient } from "./api.js";
import { wireConsole } from "./console.js";

wireConsole(document, new AskClient(""));
